//! Built-in rank-4 classification data for positive characteristic: the 23
//! diagram families (rows 1-22 plus 15'), their exchange-graph shapes,
//! diagram matching, and full per-row verification.

use std::collections::{BTreeMap, HashMap};

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::braiding::{permutations, DynkinDiagram};
use crate::cartangraph::{
    build_graph, check_neighborhood_dichotomy, exchange_graph, is_standard, NeighborhoodReport,
    DEFAULT_MAX_POINTS,
};
use crate::rootsystem::{
    check_root_strings, check_root_axioms, enumerate_roots, FinitenessVerdict,
    DEFAULT_MAX_POS_ROOTS,
};
use crate::unitgroup::{FieldUnit, GroupSpec, Order};

/// A printed label `(-1)^negative * q^exp` in the row parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Label {
    pub negative: bool,
    pub exp: i64,
}

/// `q^e`
const fn q(e: i64) -> Label {
    Label {
        negative: false,
        exp: e,
    }
}

/// `-q^e`
const fn m(e: i64) -> Label {
    Label {
        negative: true,
        exp: e,
    }
}

/// One printed rank-4 diagram: vertex labels plus labeled edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramTemplate {
    pub vertices: [Label; 4],
    pub edges: Vec<((usize, usize), Label)>,
}

/// Chain 1 - 2 - 3 - 4.
fn chain(v: [Label; 4], e: [Label; 3]) -> DiagramTemplate {
    DiagramTemplate {
        vertices: v,
        edges: vec![((0, 1), e[0]), ((1, 2), e[1]), ((2, 3), e[2])],
    }
}

/// Vertex 2 joined to 1, 3 and 4.
fn fork(v: [Label; 4], e: [Label; 3]) -> DiagramTemplate {
    DiagramTemplate {
        vertices: v,
        edges: vec![((0, 1), e[0]), ((1, 2), e[1]), ((1, 3), e[2])],
    }
}

/// Fork with the extra edge 3 - 4: edges 12, 23, 24, 34.
fn rway(v: [Label; 4], e: [Label; 4]) -> DiagramTemplate {
    DiagramTemplate {
        vertices: v,
        edges: vec![((0, 1), e[0]), ((1, 2), e[1]), ((1, 3), e[2]), ((2, 3), e[3])],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parameter {
    /// No parameter; all labels are `±1`.
    None,
    /// `q` arbitrary subject to `q^n != 1` for each listed `n`.
    Free { nonunit_powers: &'static [i64] },
    /// A primitive root of unity of the given order.
    Primitive(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharRule {
    Positive,
    Not2,
    Not3,
    Greater3,
    Exactly3,
}

impl CharRule {
    pub fn allows(self, p: u64) -> bool {
        p > 0
            && match self {
                CharRule::Positive => true,
                CharRule::Not2 => p != 2,
                CharRule::Not3 => p != 3,
                CharRule::Greater3 => p > 3,
                CharRule::Exactly3 => p == 3,
            }
    }

    pub fn describe(self) -> &'static str {
        match self {
            CharRule::Positive => "p > 0",
            CharRule::Not2 => "p > 0, p != 2",
            CharRule::Not3 => "p > 0, p != 3",
            CharRule::Greater3 => "p > 3",
            CharRule::Exactly3 => "p = 3",
        }
    }
}

/// One classification row: printed diagrams, parameter constraints, and the
/// published exchange-graph shape.
#[derive(Debug, Clone)]
pub struct RowTemplate {
    pub id: &'static str,
    pub param: Parameter,
    pub param_name: &'static str,
    pub chars: CharRule,
    /// The printed base diagrams `D_{r,1}, D_{r,2}, ...`.
    pub bases: Vec<DiagramTemplate>,
    /// Exchange-graph vertices as `(base index, vertex relabeling)`; the
    /// relabeling sends printed vertex `m` to position `perm[m]`.
    pub points: Vec<(usize, Option<[usize; 4]>)>,
    /// Exchange-graph edges `(point, point, reflection index)`, 0-based.
    pub edges: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RowError {
    #[error("characteristic constraint violated: row wants {want}, got p = {got}")]
    CharViolation { want: &'static str, got: u64 },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("row has a parameter but no assignment was given")]
    MissingAssignment,
}

const T1243: [usize; 4] = [0, 1, 3, 2];
const T4321: [usize; 4] = [3, 2, 1, 0];
const T3214: [usize; 4] = [2, 1, 0, 3];
const T3241: [usize; 4] = [2, 1, 3, 0];
const T3412: [usize; 4] = [2, 3, 0, 1];
const T3421: [usize; 4] = [2, 3, 1, 0];
const T1432: [usize; 4] = [0, 3, 2, 1];
const T1423: [usize; 4] = [0, 3, 1, 2];
const T4231: [usize; 4] = [3, 1, 2, 0];

fn plain_points(n: usize) -> Vec<(usize, Option<[usize; 4]>)> {
    (0..n).map(|b| (b, None)).collect()
}

static ROWS: Lazy<Vec<RowTemplate>> = Lazy::new(build_rows);

pub fn builtin_rows() -> &'static [RowTemplate] {
    &ROWS
}

pub fn row_by_id(id: &str) -> Option<&'static RowTemplate> {
    builtin_rows().iter().find(|r| r.id == id)
}

#[allow(clippy::too_many_lines)]
fn build_rows() -> Vec<RowTemplate> {
    let free = |n: &'static [i64]| Parameter::Free { nonunit_powers: n };
    let mut rows = Vec::new();

    rows.push(RowTemplate {
        id: "1",
        param: free(&[1]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![chain([q(1); 4], [q(-1); 3])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "2",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![chain([q(2), q(2), q(2), q(1)], [q(-2), q(-2), q(-2)])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "3",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![chain([q(1), q(1), q(1), q(2)], [q(-1), q(-1), q(-2)])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "4",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![chain([q(2), q(2), q(1), q(1)], [q(-2), q(-2), q(-1)])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "5",
        param: free(&[1]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![fork([q(1); 4], [q(-1); 3])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "6",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([m(0), q(1), q(1), q(1)], [q(-1), q(-1), q(-1)]),
            chain([m(0), m(0), q(1), q(1)], [q(1), q(-1), q(-1)]),
            chain([q(1), m(0), m(0), q(1)], [q(-1), q(1), q(-1)]),
        ],
        points: vec![(0, None), (1, None), (2, None), (1, Some(T4321)), (0, Some(T4321))],
        edges: vec![(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3)],
    });
    rows.push(RowTemplate {
        id: "7",
        param: free(&[4]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([m(0), q(2), q(2), q(1)], [q(-2), q(-2), q(-2)]),
            chain([m(0), m(0), q(2), q(1)], [q(2), q(-2), q(-2)]),
            chain([q(2), m(0), m(0), q(1)], [q(-2), q(2), q(-2)]),
            chain([q(2), q(2), m(0), m(-1)], [q(-2), q(-2), q(2)]),
        ],
        points: plain_points(4),
        edges: vec![(0, 1, 0), (1, 2, 1), (2, 3, 2)],
    });
    rows.push(RowTemplate {
        id: "8",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([m(0), q(1), q(1), q(2)], [q(-1), q(-1), q(-2)]),
            chain([m(0), m(0), q(1), q(2)], [q(1), q(-1), q(-2)]),
            chain([q(1), m(0), m(0), q(2)], [q(-1), q(1), q(-2)]),
            rway([q(1), q(1), m(0), m(0)], [q(-1), q(-1), q(-1), q(2)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, None),
            (2, Some(T1243)),
            (1, Some(T1243)),
            (0, Some(T1243)),
        ],
        edges: vec![(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 1), (5, 6, 0)],
    });
    rows.push(RowTemplate {
        id: "9",
        param: free(&[2, 3]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([q(2), q(2), q(1), m(0)], [q(-2), q(-2), q(-1)]),
            chain([q(2), q(2), m(0), m(0)], [q(-2), q(-2), q(1)]),
            rway([q(2), m(0), m(0), q(1)], [q(-2), q(2), q(-1), q(-1)]),
            rway([q(2), m(0), m(0), m(0)], [q(-2), q(2), q(1), q(-3)]),
            chain([q(2), q(2), m(0), q(-3)], [q(-2), q(-2), q(3)]),
            chain([q(2), q(1), m(0), q(-3)], [q(-2), q(-1), q(3)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, Some(T3214)),
            (4, Some(T3214)),
            (5, Some(T3241)),
        ],
        edges: vec![(0, 1, 3), (1, 2, 2), (2, 3, 1), (3, 4, 0), (3, 5, 3)],
    });
    rows.push(RowTemplate {
        id: "10",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([q(-1), m(0), q(1), q(1)], [q(1), q(-1), q(-1)]),
            chain([m(0), m(0), m(0), q(1)], [q(-1), q(1), q(-1)]),
            chain([m(0), q(-1), m(0), q(1)], [q(1), q(1), q(-1)]),
            chain([m(0), q(1), m(0), m(0)], [q(-1), q(-1), q(1)]),
            chain([m(0), q(1), q(1), m(0)], [q(-1), q(-1), q(-1)]),
            chain([m(0), m(0), m(0), m(0)], [q(1), q(-1), q(1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, None),
            (5, None),
            (4, None),
            (2, Some(T4321)),
            (3, Some(T4321)),
            (1, Some(T4321)),
            (0, Some(T4321)),
        ],
        edges: vec![
            (0, 1, 1),
            (1, 2, 0),
            (1, 3, 2),
            (2, 4, 2),
            (3, 4, 0),
            (3, 5, 3),
            (4, 6, 1),
            (4, 7, 3),
            (5, 7, 0),
            (6, 8, 3),
            (7, 8, 1),
            (8, 9, 2),
        ],
    });
    rows.push(RowTemplate {
        id: "11",
        param: free(&[4]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([q(-2), m(0), q(2), q(1)], [q(2), q(-2), q(-2)]),
            chain([m(0), m(0), m(0), q(1)], [q(-2), q(2), q(-2)]),
            chain([m(0), q(-2), m(0), q(1)], [q(2), q(2), q(-2)]),
            chain([m(0), q(2), m(0), m(-1)], [q(-2), q(-2), q(2)]),
            chain([m(0), m(0), m(0), m(-1)], [q(2), q(-2), q(2)]),
            chain([q(2), m(0), q(-2), m(-1)], [q(-2), q(2), q(2)]),
        ],
        points: plain_points(6),
        edges: vec![(0, 1, 1), (1, 2, 0), (1, 3, 2), (2, 4, 2), (3, 4, 0), (4, 5, 1)],
    });
    rows.push(RowTemplate {
        id: "12",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([q(-1), m(0), q(1), q(2)], [q(1), q(-1), q(-2)]),
            chain([m(0), m(0), m(0), q(2)], [q(-1), q(1), q(-2)]),
            chain([m(0), q(-1), m(0), q(2)], [q(1), q(1), q(-2)]),
            rway([m(0), q(1), m(0), m(0)], [q(-1), q(-1), q(-1), q(2)]),
            rway([m(0), m(0), m(0), m(0)], [q(1), q(-1), q(-1), q(2)]),
            fork([q(1), m(0), q(-1), q(-1)], [q(-1), q(1), q(1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, None),
            (4, None),
            (1, Some(T1243)),
            (5, None),
            (2, Some(T1243)),
            (0, Some(T1243)),
        ],
        edges: vec![
            (0, 1, 1),
            (1, 2, 0),
            (1, 3, 2),
            (2, 4, 2),
            (3, 4, 0),
            (3, 5, 3),
            (4, 6, 1),
            (4, 7, 3),
            (5, 7, 0),
            (5, 8, 1),
        ],
    });
    rows.push(RowTemplate {
        id: "13",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Positive,
        bases: vec![
            chain([q(1), q(1), m(0), q(-2)], [q(-1), q(-1), q(2)]),
            rway([q(1), m(0), m(0), m(0)], [q(-1), q(1), q(1), q(-2)]),
            fork([m(0), m(0), q(1), q(1)], [q(1), q(-1), q(-1)]),
            fork([m(0), q(1), q(1), q(1)], [q(-1), q(-1), q(-1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (0, Some(T1243)),
            (3, None),
        ],
        edges: vec![(0, 1, 2), (1, 2, 1), (1, 3, 3), (2, 4, 0)],
    });
    rows.push(RowTemplate {
        id: "14",
        param: free(&[2]),
        param_name: "q",
        chars: CharRule::Not2,
        bases: vec![
            chain([q(1), q(1), m(0), m(-1)], [q(-1), q(-1), m(1)]),
            rway([q(1), m(0), m(0), m(0)], [q(-1), q(1), m(0), m(-1)]),
            rway([m(-1), m(0), m(0), m(0)], [m(1), m(-1), m(0), q(1)]),
            chain([q(1), m(0), m(0), m(-1)], [q(-1), m(0), m(1)]),
            chain([m(-1), m(-1), m(0), q(1)], [m(1), m(1), q(-1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (1, Some(T3214)),
            (3, Some(T1243)),
            (0, Some(T3214)),
            (3, Some(T3241)),
            (2, Some(T3412)),
            (2, Some(T1432)),
            (4, Some(T3412)),
            (4, Some(T1432)),
        ],
        edges: vec![
            (0, 1, 2),
            (1, 2, 1),
            (1, 3, 3),
            (2, 4, 0),
            (2, 5, 3),
            (3, 6, 1),
            (5, 7, 1),
            (6, 7, 3),
            (6, 8, 0),
            (7, 9, 2),
        ],
    });
    rows.push(RowTemplate {
        id: "15",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Greater3,
        bases: vec![chain([m(-1), m(-1), m(-1), q(1)], [m(1), m(1), m(1)])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "15'",
        param: Parameter::None,
        param_name: "",
        chars: CharRule::Exactly3,
        bases: vec![chain([m(0), m(0), m(0), q(0)], [m(0), m(0), m(0)])],
        points: plain_points(1),
        edges: vec![],
    });
    rows.push(RowTemplate {
        id: "16",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Greater3,
        bases: vec![
            chain([m(0), m(-1), m(-1), q(1)], [m(1), m(1), m(1)]),
            chain([m(0), m(0), m(-1), q(1)], [m(-1), m(1), m(1)]),
            chain([m(-1), m(0), m(0), q(1)], [m(1), m(-1), m(1)]),
            chain([m(-1), m(-1), m(0), q(-1)], [m(1), m(1), m(-1)]),
        ],
        points: plain_points(4),
        edges: vec![(0, 1, 0), (1, 2, 1), (2, 3, 2)],
    });
    rows.push(RowTemplate {
        id: "17",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Greater3,
        bases: vec![
            chain([m(1), m(1), m(1), q(1)], [m(-1), m(-1), m(-1)]),
            chain([m(1), m(1), m(0), q(1)], [m(-1), m(-1), m(0)]),
            rway([m(1), m(0), m(0), q(1)], [m(-1), m(1), q(-1), m(0)]),
            rway([m(1), m(0), m(0), m(0)], [m(-1), m(1), q(1), m(1)]),
            chain([m(1), q(1), m(0), m(1)], [m(-1), q(-1), m(-1)]),
            chain([m(1), m(1), m(0), m(1)], [m(-1), m(-1), m(-1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, Some(T3214)),
            (4, Some(T3421)),
            (5, Some(T3214)),
            (4, Some(T3241)),
            (3, Some(T3412)),
            (2, Some(T1432)),
            (5, Some(T3412)),
            (1, Some(T1432)),
            (0, Some(T1432)),
        ],
        edges: vec![
            (0, 1, 3),
            (1, 2, 2),
            (2, 3, 1),
            (2, 4, 3),
            (3, 5, 0),
            (3, 6, 3),
            (4, 7, 1),
            (6, 8, 1),
            (7, 8, 3),
            (7, 9, 0),
            (8, 10, 2),
            (10, 11, 1),
        ],
    });
    rows.push(RowTemplate {
        id: "18",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Not3,
        bases: vec![
            chain([q(-1), q(-1), q(1), m(0)], [q(1), q(1), q(-1)]),
            chain([q(-1), q(-1), m(0), m(0)], [q(1), q(1), q(1)]),
            rway([q(-1), m(0), m(0), q(1)], [q(1), q(-1), q(-1), q(-1)]),
            fork([q(-1), m(0), m(0), m(0)], [q(1), q(-1), q(1)]),
            fork([q(-1), q(1), m(0), m(0)], [q(1), q(-1), q(-1)]),
            fork([q(-1), q(-1), m(0), m(0)], [q(1), q(1), q(1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, Some(T3214)),
            (5, Some(T3214)),
            (4, Some(T3214)),
            (3, Some(T3241)),
            (2, Some(T4231)),
            (1, Some(T4231)),
            (0, Some(T4231)),
        ],
        edges: vec![
            (0, 1, 3),
            (1, 2, 2),
            (2, 3, 1),
            (3, 4, 0),
            (3, 5, 3),
            (4, 6, 3),
            (5, 6, 0),
            (6, 7, 1),
            (7, 8, 2),
            (8, 9, 0),
        ],
    });
    rows.push(RowTemplate {
        id: "19",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Greater3,
        bases: vec![
            chain([m(1), m(0), m(-1), q(1)], [m(-1), m(1), m(1)]),
            chain([m(0), m(0), m(0), q(1)], [m(1), m(-1), m(1)]),
            chain([m(0), m(1), m(0), q(1)], [m(-1), m(-1), m(1)]),
            chain([m(0), m(-1), m(0), q(-1)], [m(1), m(1), m(-1)]),
            chain([m(0), m(0), m(0), q(-1)], [m(-1), m(1), m(-1)]),
            chain([m(-1), m(0), m(1), q(-1)], [m(1), m(-1), m(-1)]),
        ],
        points: plain_points(6),
        edges: vec![(0, 1, 1), (1, 2, 0), (1, 3, 2), (2, 4, 2), (3, 4, 0), (4, 5, 1)],
    });
    rows.push(RowTemplate {
        id: "20",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Not3,
        bases: vec![
            chain([q(-1), m(0), q(1), m(0)], [q(1), q(-1), q(1)]),
            chain([q(-1), m(0), m(-1), m(0)], [q(1), q(-1), q(-1)]),
            chain([m(0), m(0), m(0), m(0)], [q(-1), q(1), q(1)]),
            chain([m(0), q(-1), m(0), m(0)], [q(1), q(1), q(1)]),
            chain([m(0), m(0), q(1), m(0)], [q(-1), q(1), q(-1)]),
            chain([m(0), q(-1), q(1), m(0)], [q(1), q(1), q(-1)]),
            rway([m(0), q(1), m(0), q(1)], [q(-1), q(-1), q(-1), q(-1)]),
            rway([m(0), m(0), m(0), q(1)], [q(1), q(-1), q(-1), q(-1)]),
            fork([q(1), m(0), q(-1), m(0)], [q(-1), q(1), q(1)]),
            fork([q(1), q(1), q(-1), m(0)], [q(-1), q(1), q(-1)]),
        ],
        points: vec![
            (0, None),
            (2, None),
            (1, None),
            (3, None),
            (6, None),
            (4, None),
            (7, None),
            (5, None),
            (8, None),
            (9, None),
        ],
        edges: vec![
            (0, 1, 1),
            (0, 2, 3),
            (1, 3, 0),
            (1, 4, 2),
            (1, 5, 3),
            (2, 5, 1),
            (3, 6, 2),
            (3, 7, 3),
            (4, 6, 0),
            (5, 7, 0),
            (6, 8, 1),
            (8, 9, 3),
        ],
    });
    rows.push(RowTemplate {
        id: "21",
        param: Parameter::Primitive(3),
        param_name: "z",
        chars: CharRule::Not3,
        bases: vec![
            chain([m(0), q(1), q(1), m(0)], [q(-1), q(-1), q(1)]),
            chain([m(0), q(1), m(-1), m(0)], [q(-1), q(-1), q(-1)]),
            chain([m(0), m(0), q(1), m(0)], [q(1), q(-1), q(1)]),
            chain([m(0), m(0), m(-1), m(0)], [q(1), q(-1), q(-1)]),
            chain([q(1), m(0), q(1), m(0)], [q(-1), q(1), q(-1)]),
            chain([q(1), m(0), m(0), m(0)], [q(-1), q(1), q(1)]),
            rway([q(1), q(1), m(0), q(1)], [q(-1), q(-1), q(-1), q(-1)]),
        ],
        points: plain_points(7),
        edges: vec![
            (0, 2, 0),
            (2, 5, 1),
            (5, 6, 2),
            (1, 3, 0),
            (3, 4, 1),
            (0, 1, 3),
            (2, 3, 3),
            (5, 4, 3),
        ],
    });
    rows.push(RowTemplate {
        id: "22",
        param: Parameter::Primitive(4),
        param_name: "z",
        chars: CharRule::Not2,
        bases: vec![
            chain([m(1), m(0), q(1), m(1)], [q(1), m(1), q(1)]),
            chain([m(0), m(0), m(0), m(1)], [m(1), q(1), q(1)]),
            chain([m(0), m(1), m(0), m(1)], [q(1), q(1), q(1)]),
            rway([m(0), q(1), m(0), m(0)], [m(1), m(1), m(0), m(1)]),
            rway([m(0), m(0), m(0), m(0)], [q(1), m(1), m(0), m(1)]),
            chain([m(0), q(1), m(0), m(1)], [m(1), m(0), q(1)]),
            chain([m(0), m(0), m(0), m(1)], [q(1), m(0), q(1)]),
            rway([m(1), m(0), q(1), m(0)], [q(1), m(1), m(0), m(1)]),
        ],
        points: vec![
            (0, None),
            (1, None),
            (2, None),
            (3, None),
            (4, None),
            (5, Some(T1243)),
            (7, Some(T3214)),
            (6, Some(T1243)),
            (6, Some(T1423)),
            (7, Some(T3412)),
            (5, Some(T1423)),
            (4, Some(T1432)),
            (3, Some(T1432)),
            (2, Some(T1432)),
            (1, Some(T1432)),
            (0, Some(T1432)),
        ],
        edges: vec![
            (0, 1, 1),
            (1, 2, 0),
            (1, 3, 2),
            (2, 4, 2),
            (3, 4, 0),
            (3, 5, 3),
            (4, 6, 1),
            (4, 7, 3),
            (5, 7, 0),
            (6, 8, 3),
            (7, 9, 1),
            (8, 10, 0),
            (8, 11, 1),
            (9, 11, 3),
            (10, 12, 1),
            (11, 12, 0),
            (11, 13, 2),
            (12, 14, 2),
            (13, 14, 0),
            (14, 15, 3),
        ],
    });

    rows
}

/// How a queried diagram sits inside a row.
#[derive(Debug, Clone)]
pub struct MatchResult {
    pub row: &'static str,
    /// Value assigned to the row parameter, if the row has one.
    pub assignment: Option<FieldUnit>,
    /// Template vertex `m` corresponds to queried vertex `perm[m]`.
    pub perm: Vec<usize>,
    /// Which printed base diagram matched (0-based).
    pub base: usize,
}

fn instantiate_label(label: Label, spec: &GroupSpec, value: Option<&FieldUnit>) -> FieldUnit {
    let base = match value {
        Some(v) => v.power(label.exp),
        None => {
            debug_assert_eq!(label.exp, 0);
            spec.identity()
        }
    };
    if label.negative {
        spec.sign().mul(&base)
    } else {
        base
    }
}

fn instantiate_template(
    t: &DiagramTemplate,
    spec: &GroupSpec,
    value: Option<&FieldUnit>,
) -> DynkinDiagram {
    let vertices: Vec<FieldUnit> = t
        .vertices
        .iter()
        .map(|&l| instantiate_label(l, spec, value))
        .collect();
    let edges = t
        .edges
        .iter()
        .map(|&(pair, l)| (pair, instantiate_label(l, spec, value)));
    DynkinDiagram::new(vertices, edges)
}

fn check_assignment(
    row: &RowTemplate,
    spec: &GroupSpec,
    value: Option<&FieldUnit>,
) -> Result<(), RowError> {
    let p = spec.characteristic();
    if !row.chars.allows(p) {
        return Err(RowError::CharViolation {
            want: row.chars.describe(),
            got: p,
        });
    }
    match (&row.param, value) {
        (Parameter::None, _) => Ok(()),
        (_, None) => Err(RowError::MissingAssignment),
        (Parameter::Free { nonunit_powers }, Some(v)) => {
            for &n in *nonunit_powers {
                if v.power(n).is_identity() {
                    return Err(RowError::Constraint(format!(
                        "{}^{n} = 1 but the row demands {}^{n} != 1",
                        row.param_name, row.param_name
                    )));
                }
            }
            Ok(())
        }
        (Parameter::Primitive(n), Some(v)) => {
            if v.element_order() == Order::Finite(*n) {
                Ok(())
            } else {
                Err(RowError::Constraint(format!(
                    "{} must be a primitive root of unity of order {n}",
                    row.param_name
                )))
            }
        }
    }
}

/// Instantiates the row's exchange-graph points (base diagrams with their
/// printed relabelings applied) under a concrete assignment.
pub fn instantiate_row(
    row: &RowTemplate,
    spec: &GroupSpec,
    value: Option<&FieldUnit>,
) -> Result<Vec<DynkinDiagram>, RowError> {
    check_assignment(row, spec, value)?;
    let mut out = Vec::new();
    for &(base, tau) in &row.points {
        let d = instantiate_template(&row.bases[base], spec, value);
        // A printed edge that degenerates to 1 would change the shape; the
        // constraints are meant to prevent this.
        if d.edges().count() != row.bases[base].edges.len() {
            return Err(RowError::Constraint(format!(
                "an edge label of diagram {} collapses to 1 under this assignment",
                base + 1
            )));
        }
        out.push(match tau {
            Some(perm) => d.permuted(&perm),
            None => d,
        });
    }
    Ok(out)
}

/// Matches a rank-4 diagram against every row, every printed base diagram,
/// and every vertex relabeling; results deduplicated by (row, assignment).
pub fn match_diagram(d: &DynkinDiagram, spec: &GroupSpec) -> Vec<MatchResult> {
    let mut out: Vec<MatchResult> = Vec::new();
    if d.theta() != 4 || spec.characteristic() == 0 {
        return out;
    }
    let perms = permutations(4);
    for row in builtin_rows() {
        if !row.chars.allows(spec.characteristic()) {
            continue;
        }
        for (bi, base) in row.bases.iter().enumerate() {
            for perm in &perms {
                for value in unify(base, d, perm, spec) {
                    if check_assignment(row, spec, value.as_ref()).is_err() {
                        continue;
                    }
                    let inst = instantiate_template(base, spec, value.as_ref());
                    if inst.permuted(perm) != *d {
                        continue;
                    }
                    let duplicate = out
                        .iter()
                        .any(|m| m.row == row.id && m.assignment == value);
                    if !duplicate {
                        out.push(MatchResult {
                            row: row.id,
                            assignment: value,
                            perm: perm.clone(),
                            base: bi,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Candidate parameter values making the template labels equal the observed
/// labels of `d` under the correspondence `template m -> d vertex perm[m]`.
fn unify(
    t: &DiagramTemplate,
    d: &DynkinDiagram,
    perm: &[usize],
    spec: &GroupSpec,
) -> Vec<Option<FieldUnit>> {
    // Equations label = observed, vertices first.
    let mut equations: Vec<(Label, FieldUnit)> = Vec::new();
    for (m, &l) in t.vertices.iter().enumerate() {
        equations.push((l, d.vertex(perm[m]).clone()));
    }
    for &((a, b), l) in &t.edges {
        equations.push((l, d.edge_product(perm[a], perm[b])));
    }
    // Constant equations must hold outright.
    for (l, obs) in equations.iter().filter(|(l, _)| l.exp == 0) {
        let want = if l.negative {
            spec.sign()
        } else {
            spec.identity()
        };
        if *obs != want {
            return Vec::new();
        }
    }
    let Some((l, obs)) = equations.iter().find(|(l, _)| l.exp != 0) else {
        // No parameter occurs (row 15'); a single "assignment" of nothing.
        return vec![None];
    };
    // sign * q^exp = obs  =>  q^exp = sign * obs.
    let target = if l.negative {
        spec.sign().mul(obs)
    } else {
        obs.clone()
    };
    let mut candidates = target.kth_power_preimages(l.exp);
    candidates.retain(|v| {
        equations.iter().all(|(l, obs)| {
            instantiate_label(*l, spec, Some(v)) == *obs
        })
    });
    candidates.sort();
    candidates.dedup();
    candidates.into_iter().map(Some).collect()
}

/// Outcome of replaying one classification row.
#[derive(Debug, Clone)]
pub struct Report {
    pub row: &'static str,
    pub points: usize,
    pub positive_roots: usize,
    pub standard: bool,
    pub neighborhood: Option<NeighborhoodReport>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rebuilds the Cartan graph from the row's first printed diagram and checks
/// everything the tables claim: finiteness, the exact point-diagram set, the
/// labeled exchange graph, the root-system axioms, and the good-neighborhood
/// dichotomy.
pub fn verify_row(
    row: &RowTemplate,
    spec: &GroupSpec,
    value: Option<&FieldUnit>,
) -> Result<Report, RowError> {
    let printed = instantiate_row(row, spec, value)?;
    let mut report = Report {
        row: row.id,
        points: 0,
        positive_roots: 0,
        standard: false,
        neighborhood: None,
        failures: Vec::new(),
    };

    let graph = match build_graph(&printed[0].to_braiding(), DEFAULT_MAX_POINTS) {
        Ok(g) => g,
        Err(e) => {
            report.failures.push(format!("graph construction failed: {e}"));
            return Ok(report);
        }
    };
    report.points = graph.points().len();
    report.standard = is_standard(&graph);

    // The printed points must be exactly the graph's diagrams, bijectively.
    let mut id_of: HashMap<&DynkinDiagram, usize> = HashMap::new();
    for p in graph.points() {
        id_of.insert(&p.diagram, p.id);
    }
    let mut printed_ids: Vec<Option<usize>> = Vec::new();
    for (k, d) in printed.iter().enumerate() {
        let id = id_of.get(d).copied();
        if id.is_none() {
            report
                .failures
                .push(format!("printed diagram {} is not a point of the graph", k + 1));
        }
        if printed.iter().take(k).any(|other| other == d) {
            report
                .failures
                .push(format!("printed diagram {} duplicates an earlier one", k + 1));
        }
        printed_ids.push(id);
    }
    if printed.len() != graph.points().len() {
        report.failures.push(format!(
            "table prints {} points but the graph has {}",
            printed.len(),
            graph.points().len()
        ));
    }

    // Labeled exchange-graph comparison through the diagram bijection.
    if report.failures.is_empty() {
        let mut expected: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &(u, v, i) in &row.edges {
            let (a, b) = (printed_ids[u].unwrap(), printed_ids[v].unwrap());
            let labels = expected.entry((a.min(b), a.max(b))).or_default();
            if !labels.contains(&i) {
                labels.push(i);
            }
        }
        for labels in expected.values_mut() {
            labels.sort_unstable();
        }
        let actual = exchange_graph(&graph).edges;
        if expected != actual {
            report.failures.push(format!(
                "exchange graph differs from the table: expected {expected:?}, got {actual:?}"
            ));
        }
    }

    match enumerate_roots(&graph, DEFAULT_MAX_POS_ROOTS) {
        FinitenessVerdict::Finite(r) => {
            report.positive_roots = r.positive(0).len();
            for f in check_root_axioms(&graph, &r) {
                report.failures.push(format!("axiom {}: {}", f.axiom, f.witness));
            }
            for f in check_root_strings(&graph, &r) {
                report.failures.push(format!("root string: {}", f.witness));
            }
        }
        other => {
            report
                .failures
                .push(format!("root system is not finite: {other:?}"));
        }
    }

    let nh = check_neighborhood_dichotomy(&graph);
    if nh == NeighborhoodReport::Violation {
        report
            .failures
            .push("neither standard of finite type nor a good neighborhood".into());
    }
    report.neighborhood = Some(nh);

    Ok(report)
}

/// The parameter assignments used by `verify-tables`: a generic (free)
/// parameter where the row allows one, plus concrete roots of unity in small
/// characteristics permitted by the row.
pub fn canonical_assignments(row: &RowTemplate) -> Vec<(GroupSpec, Option<FieldUnit>)> {
    match row.param {
        Parameter::None => {
            vec![(GroupSpec::new(3, &[]).unwrap(), None)]
        }
        Parameter::Free { .. } => {
            let generic = GroupSpec::new(5, &[("q", 0)]).unwrap();
            let gq = generic.generator_unit("q").unwrap();
            let torsion = GroupSpec::new(7, &[("q", 5)]).unwrap();
            let tq = torsion.generator_unit("q").unwrap();
            vec![(generic, Some(gq)), (torsion, Some(tq))]
        }
        Parameter::Primitive(3) => {
            let s = GroupSpec::new(5, &[("z", 3)]).unwrap();
            let z = s.generator_unit("z").unwrap();
            vec![(s, Some(z))]
        }
        Parameter::Primitive(n) => {
            let mut out = Vec::new();
            for p in [3u64, 5] {
                if n % p != 0 {
                    let s = GroupSpec::new(p, &[("z", n)]).unwrap();
                    let z = s.generator_unit("z").unwrap();
                    out.push((s, Some(z)));
                }
            }
            out
        }
    }
}
