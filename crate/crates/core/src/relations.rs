//! The polynomial relations among the n = 3 invariants that characterize
//! fully decoupleable tensors ([`FULL`]) and partially-but-not-fully
//! decoupleable tensors ([`PARTIAL`]).
//!
//! Each relation reads `lhs · I = Σ c · Π v`, where `I` is the invariant
//! named by the relation and the `v` range over [`V`]. In [`FULL`] the `Q`
//! variables are the characteristic-polynomial coefficients of `Γ*²`; in
//! [`PARTIAL`] `Q1` is `q̃1` of the partial test.

use crate::invariants::InvariantSetN3;
use crate::scalar::{int, Check, Scalar, Tolerance};

/// Variables appearing on the right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V {
    H2,
    J2,
    H4,
    L4,
    Q1,
    Q2,
    Q3,
}

#[derive(Debug, Clone, Copy)]
pub struct Relation {
    pub name: &'static str,
    pub degree: u32,
    pub lhs: i64,
    pub rhs: &'static [(i64, &'static [V])],
}

/// One evaluated relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationResidual<S> {
    pub name: &'static str,
    pub degree: u32,
    /// `lhs · I - rhs`.
    pub residual: S,
    /// `|residual|` divided by the sum of magnitudes of all terms.
    pub normalized: f64,
    pub check: Check,
}

impl Relation {
    /// Residual and its scale-free size; `q` holds `Q1, Q2, Q3` as available.
    pub fn evaluate<S: Scalar>(&self, inv: &InvariantSetN3<S>, q: &[S]) -> (S, f64) {
        let var = |v: V| -> S {
            match v {
                V::H2 => inv.h2.clone(),
                V::J2 => inv.j2.clone(),
                V::H4 => inv.h4.clone(),
                V::L4 => inv.l4.clone(),
                V::Q1 => q[0].clone(),
                V::Q2 => q[1].clone(),
                V::Q3 => q[2].clone(),
            }
        };
        let lhs = int::<S>(self.lhs) * inv.get(self.name).expect("relation names an invariant").clone();
        let mut scale = lhs.abs().to_f64();
        let mut rhs = S::zero();
        for (c, factors) in self.rhs {
            let term = factors
                .iter()
                .fold(int::<S>(*c), |acc, &v| acc * var(v));
            scale += term.abs().to_f64();
            rhs = rhs + term;
        }
        let residual = lhs - rhs;
        let r = residual.abs().to_f64();
        let normalized = if scale > 0.0 { r / scale } else { r };
        (residual, normalized)
    }
}

/// Evaluate every relation of a table and judge it.
pub fn evaluate_table<S: Scalar>(
    table: &[Relation],
    inv: &InvariantSetN3<S>,
    q: &[S],
    tol: Tolerance,
) -> Vec<RelationResidual<S>> {
    table
        .iter()
        .map(|rel| {
            let (residual, normalized) = rel.evaluate(inv, q);
            let check = if S::EXACT {
                tol.judge(&residual, 1.0)
            } else {
                tol.judge_normalized(normalized)
            };
            RelationResidual {
                name: rel.name,
                degree: rel.degree,
                residual,
                normalized,
                check,
            }
        })
        .collect()
}

/// Combined outcome of a residual table.
pub fn overall<S>(rows: &[RelationResidual<S>]) -> Check {
    rows.iter().fold(Check::Pass, |acc, r| acc.and(r.check))
}

pub const FULL: &[Relation] = &[
    Relation {
        name: "H2",
        degree: 2,
        lhs: 1,
        rhs: &[
            (10, &[V::Q1]),
        ],
    },
    Relation {
        name: "H4",
        degree: 4,
        lhs: 1,
        rhs: &[
            (44, &[V::Q1, V::Q1]),
            (-30, &[V::Q2]),
        ],
    },
    Relation {
        name: "J2",
        degree: 2,
        lhs: 1,
        rhs: &[
            (1, &[V::Q1]),
        ],
    },
    Relation {
        name: "L4",
        degree: 4,
        lhs: 1,
        rhs: &[
            (2, &[V::Q1, V::Q1]),
            (-10, &[V::Q2]),
        ],
    },
    Relation {
        name: "H6",
        degree: 6,
        lhs: 1,
        rhs: &[
            (64, &[V::Q1, V::Q1, V::Q1]),
            (-220, &[V::Q1, V::Q2]),
            (300, &[V::Q3]),
        ],
    },
    Relation {
        name: "H10",
        degree: 10,
        lhs: 1,
        rhs: &[
            (1024, &[V::Q1, V::Q1, V::Q1, V::Q1, V::Q1]),
            (-5600, &[V::Q1, V::Q1, V::Q1, V::Q2]),
            (7600, &[V::Q1, V::Q1, V::Q3]),
            (5800, &[V::Q1, V::Q2, V::Q2]),
            (-7000, &[V::Q2, V::Q3]),
        ],
    },
    Relation {
        name: "J4",
        degree: 4,
        lhs: 1,
        rhs: &[
            (6, &[V::Q1, V::Q1]),
            (-10, &[V::Q2]),
        ],
    },
    Relation {
        name: "K4",
        degree: 4,
        lhs: 1,
        rhs: &[
            (8, &[V::Q1, V::Q1]),
            (-20, &[V::Q2]),
        ],
    },
    Relation {
        name: "J6",
        degree: 6,
        lhs: 1,
        rhs: &[
            (12, &[V::Q1, V::Q1, V::Q1]),
            (-55, &[V::Q1, V::Q2]),
            (75, &[V::Q3]),
        ],
    },
    Relation {
        name: "K6",
        degree: 6,
        lhs: 1,
        rhs: &[
            (16, &[V::Q1, V::Q1, V::Q1]),
            (-70, &[V::Q1, V::Q2]),
            (150, &[V::Q3]),
        ],
    },
    Relation {
        name: "L6",
        degree: 6,
        lhs: 1,
        rhs: &[
            (48, &[V::Q1, V::Q1, V::Q1]),
            (-150, &[V::Q1, V::Q2]),
            (150, &[V::Q3]),
        ],
    },
    Relation {
        name: "M6",
        degree: 6,
        lhs: 1,
        rhs: &[
            (4, &[V::Q1, V::Q1, V::Q1]),
            (-15, &[V::Q1, V::Q2]),
            (75, &[V::Q3]),
        ],
    },
    Relation {
        name: "H8",
        degree: 8,
        lhs: 1,
        rhs: &[
            (288, &[V::Q1, V::Q1, V::Q1, V::Q1]),
            (-1080, &[V::Q1, V::Q1, V::Q2]),
            (1300, &[V::Q1, V::Q3]),
            (300, &[V::Q2, V::Q2]),
        ],
    },
];

pub const PARTIAL: &[Relation] = &[
    Relation {
        name: "J4",
        degree: 4,
        lhs: 18,
        rhs: &[
            (-1, &[V::H2, V::H2]),
            (12, &[V::H2, V::J2]),
            (-24, &[V::J2, V::J2]),
            (2, &[V::H4]),
            (12, &[V::L4]),
        ],
    },
    Relation {
        name: "K4",
        degree: 4,
        lhs: 9,
        rhs: &[
            (-2, &[V::H2, V::H2]),
            (15, &[V::H2, V::J2]),
            (-66, &[V::J2, V::J2]),
            (4, &[V::H4]),
            (6, &[V::L4]),
        ],
    },
    Relation {
        name: "H6",
        degree: 6,
        lhs: 27,
        rhs: &[
            (-13, &[V::H2, V::H2, V::H2]),
            (-7, &[V::H2, V::H2, V::J2]),
            (-156, &[V::H2, V::J2, V::J2]),
            (26, &[V::H2, V::H4]),
            (30, &[V::H2, V::L4]),
            (372, &[V::J2, V::J2, V::J2]),
            (-7272, &[V::J2, V::J2, V::Q1]),
            (146, &[V::J2, V::H4]),
            (-924, &[V::J2, V::L4]),
            (-8100, &[V::J2, V::Q1, V::Q1]),
            (234, &[V::H4, V::Q1]),
            (-1512, &[V::L4, V::Q1]),
            (8100, &[V::Q1, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "J6",
        degree: 6,
        lhs: 36,
        rhs: &[
            (-1, &[V::H2, V::H2, V::H2]),
            (12, &[V::H2, V::J2, V::J2]),
            (2, &[V::H2, V::H4]),
            (12, &[V::H2, V::L4]),
            (-72, &[V::J2, V::J2, V::J2]),
            (-144, &[V::J2, V::J2, V::Q1]),
            (6, &[V::J2, V::H4]),
            (-2700, &[V::J2, V::Q1, V::Q1]),
            (18, &[V::H4, V::Q1]),
            (-324, &[V::L4, V::Q1]),
            (2700, &[V::Q1, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "K6",
        degree: 6,
        lhs: 162,
        rhs: &[
            (-19, &[V::H2, V::H2, V::H2]),
            (14, &[V::H2, V::H2, V::J2]),
            (96, &[V::H2, V::J2, V::J2]),
            (38, &[V::H2, V::H4]),
            (48, &[V::H2, V::L4]),
            (-744, &[V::J2, V::J2, V::J2]),
            (-8136, &[V::J2, V::J2, V::Q1]),
            (86, &[V::J2, V::H4]),
            (-744, &[V::J2, V::L4]),
            (-24300, &[V::J2, V::Q1, V::Q1]),
            (342, &[V::H4, V::Q1]),
            (-3456, &[V::L4, V::Q1]),
            (24300, &[V::Q1, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "L6",
        degree: 6,
        lhs: 81,
        rhs: &[
            (-19, &[V::H2, V::H2, V::H2]),
            (23, &[V::H2, V::H2, V::J2]),
            (-174, &[V::H2, V::J2, V::J2]),
            (38, &[V::H2, V::H4]),
            (48, &[V::H2, V::L4]),
            (-204, &[V::J2, V::J2, V::J2]),
            (-7488, &[V::J2, V::J2, V::Q1]),
            (149, &[V::J2, V::H4]),
            (-852, &[V::J2, V::L4]),
            (-12150, &[V::J2, V::Q1, V::Q1]),
            (261, &[V::H4, V::Q1]),
            (-1998, &[V::L4, V::Q1]),
            (12150, &[V::Q1, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "M6",
        degree: 6,
        lhs: 324,
        rhs: &[
            (1, &[V::H2, V::H2, V::H2]),
            (-14, &[V::H2, V::H2, V::J2]),
            (120, &[V::H2, V::J2, V::J2]),
            (-2, &[V::H2, V::H4]),
            (6, &[V::H2, V::L4]),
            (-552, &[V::J2, V::J2, V::J2]),
            (5544, &[V::J2, V::J2, V::Q1]),
            (22, &[V::J2, V::H4]),
            (420, &[V::J2, V::L4]),
            (-24300, &[V::J2, V::Q1, V::Q1]),
            (-18, &[V::H4, V::Q1]),
            (-2376, &[V::L4, V::Q1]),
            (24300, &[V::Q1, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "H8",
        degree: 8,
        lhs: 1458,
        rhs: &[
            (70, &[V::H2, V::H2, V::H2, V::H2]),
            (149, &[V::H2, V::H2, V::H2, V::J2]),
            (830, &[V::H2, V::H2, V::J2, V::J2]),
            (-361, &[V::H2, V::H2, V::H4]),
            (30, &[V::H2, V::H2, V::L4]),
            (-8868, &[V::H2, V::J2, V::J2, V::J2]),
            (674, &[V::H2, V::J2, V::H4]),
            (408, &[V::H2, V::J2, V::L4]),
            (30792, &[V::J2, V::J2, V::J2, V::J2]),
            (158832, &[V::J2, V::J2, V::J2, V::Q1]),
            (-7216, &[V::J2, V::J2, V::H4]),
            (-3624, &[V::J2, V::J2, V::L4]),
            (-356400, &[V::J2, V::J2, V::Q1, V::Q1]),
            (5796, &[V::J2, V::H4, V::Q1]),
            (-206928, &[V::J2, V::L4, V::Q1]),
            (1895400, &[V::J2, V::Q1, V::Q1, V::Q1]),
            (442, &[V::H4, V::H4]),
            (3828, &[V::H4, V::L4]),
            (-40500, &[V::H4, V::Q1, V::Q1]),
            (-11088, &[V::L4, V::L4]),
            (121500, &[V::L4, V::Q1, V::Q1]),
        ],
    },
    Relation {
        name: "H10",
        degree: 10,
        lhs: 2187,
        rhs: &[
            (70, &[V::H2, V::H2, V::H2, V::H2, V::H2]),
            (-1161, &[V::H2, V::H2, V::H2, V::H2, V::J2]),
            (110, &[V::H2, V::H2, V::H2, V::J2, V::J2]),
            (-879, &[V::H2, V::H2, V::H2, V::H4]),
            (-630, &[V::H2, V::H2, V::H2, V::L4]),
            (-159160, &[V::H2, V::H2, V::J2, V::J2, V::J2]),
            (2866, &[V::H2, V::H2, V::J2, V::H4]),
            (204, &[V::H2, V::H2, V::J2, V::L4]),
            (607632, &[V::H2, V::J2, V::J2, V::J2, V::J2]),
            (12212, &[V::H2, V::J2, V::J2, V::H4]),
            (-125412, &[V::H2, V::J2, V::J2, V::L4]),
            (1478, &[V::H2, V::H4, V::H4]),
            (2040, &[V::H2, V::H4, V::L4]),
            (2448, &[V::H2, V::L4, V::L4]),
            (-1226976, &[V::J2, V::J2, V::J2, V::J2, V::J2]),
            (-9237600, &[V::J2, V::J2, V::J2, V::J2, V::Q1]),
            (230888, &[V::J2, V::J2, V::J2, V::H4]),
            (-423096, &[V::J2, V::J2, V::J2, V::L4]),
            (-4017600, &[V::J2, V::J2, V::J2, V::Q1, V::Q1]),
            (-95256, &[V::J2, V::J2, V::H4, V::Q1]),
            (-505440, &[V::J2, V::J2, V::L4, V::Q1]),
            (-5832000, &[V::J2, V::J2, V::Q1, V::Q1, V::Q1]),
            (2506, &[V::J2, V::H4, V::H4]),
            (-26160, &[V::J2, V::H4, V::L4]),
            (-251100, &[V::J2, V::H4, V::Q1, V::Q1]),
            (-35928, &[V::J2, V::L4, V::L4]),
            (-777600, &[V::J2, V::L4, V::Q1, V::Q1]),
            (10782, &[V::H4, V::H4, V::Q1]),
            (-71496, &[V::H4, V::L4, V::Q1]),
            (510300, &[V::H4, V::Q1, V::Q1, V::Q1]),
            (-35640, &[V::L4, V::L4, V::Q1]),
        ],
    },
];
