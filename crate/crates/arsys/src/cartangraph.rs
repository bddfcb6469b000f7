//! BFS construction of the semi-Cartan graph attached to a braiding matrix,
//! the exchange graph, standardness, and good-neighborhood detection.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::braiding::{
    cartan_matrix, dynkin_of, permutations, reflect, BraidError, BraidingMatrix, DynkinDiagram,
    GeneralizedCartanMatrix,
};
use crate::unitgroup::GroupSpec;

pub const DEFAULT_MAX_POINTS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("point {point} is not i-finite at (i, j) = ({i}, {j}): {diagram}")]
    NotIFinite {
        point: usize,
        i: usize,
        j: usize,
        diagram: String,
    },
    #[error("more than {limit} distinct diagrams; graph presumed infinite")]
    PointLimitExceeded { limit: usize },
}

/// One point of the semi-Cartan graph: a generalized Dynkin diagram together
/// with its Cartan matrix and the reflection neighbor map.
#[derive(Debug, Clone)]
pub struct Point {
    pub id: usize,
    pub diagram: DynkinDiagram,
    pub gcm: GeneralizedCartanMatrix,
    /// `neighbor[i]` is the id of `r_i(self)`.
    pub neighbor: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CartanGraph {
    spec: GroupSpec,
    theta: usize,
    points: Vec<Point>,
    origin: usize,
    max_points: usize,
}

impl CartanGraph {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &Point {
        &self.points[id]
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    /// `r_i(X)` as an id.
    pub fn neighbor(&self, x: usize, i: usize) -> usize {
        self.points[x].neighbor[i]
    }
}

/// Undirected projection of the neighbor map with self-loops omitted and
/// multiple labels collected per vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeGraph {
    pub vertex_count: usize,
    /// Keys `(x, y)` with `x < y`; values are the sorted reflection labels.
    pub edges: BTreeMap<(usize, usize), Vec<usize>>,
}

pub fn build_graph(m: &BraidingMatrix, max_points: usize) -> Result<CartanGraph, GraphError> {
    let theta = m.theta();
    let lift_error = |e: BraidError, point: usize, d: &DynkinDiagram| match e {
        BraidError::NotIFinite { i, j } => GraphError::NotIFinite {
            point,
            i,
            j,
            diagram: d.compact_string(),
        },
        other => unreachable!("unexpected reflection failure: {other}"),
    };

    let origin = dynkin_of(m);
    let mut ids: HashMap<DynkinDiagram, usize> = HashMap::new();
    let mut points: Vec<Point> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let insert = |d: DynkinDiagram,
                      ids: &mut HashMap<DynkinDiagram, usize>,
                      points: &mut Vec<Point>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, GraphError> {
        if let Some(&id) = ids.get(&d) {
            return Ok(id);
        }
        let id = points.len();
        if id >= max_points {
            return Err(GraphError::PointLimitExceeded { limit: max_points });
        }
        let gcm = cartan_matrix(&d.to_braiding()).map_err(|e| lift_error(e, id, &d))?;
        ids.insert(d.clone(), id);
        points.push(Point {
            id,
            diagram: d,
            gcm,
            neighbor: vec![usize::MAX; theta],
        });
        queue.push_back(id);
        Ok(id)
    };

    insert(origin, &mut ids, &mut points, &mut queue)?;
    while let Some(x) = queue.pop_front() {
        for i in 0..theta {
            let d = points[x].diagram.clone();
            let reflected = reflect(&d.to_braiding(), i).map_err(|e| lift_error(e, x, &d))?;
            let y = insert(dynkin_of(&reflected), &mut ids, &mut points, &mut queue)?;
            points[x].neighbor[i] = y;
        }
    }

    // Structural sanity on the finished graph; failures here would be
    // internal bugs, not properties of the input.
    for p in &points {
        for i in 0..theta {
            let y = p.neighbor[i];
            debug_assert_eq!(points[y].neighbor[i], p.id, "r_{i} is not an involution");
            debug_assert_eq!(
                points[y].gcm.rows()[i],
                p.gcm.rows()[i],
                "Cartan row {i} changed across r_{i}"
            );
        }
    }

    Ok(CartanGraph {
        spec: m.spec().clone(),
        theta,
        points,
        origin: 0,
        max_points,
    })
}

pub fn exchange_graph(g: &CartanGraph) -> ExchangeGraph {
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for p in g.points() {
        for (i, &y) in p.neighbor.iter().enumerate() {
            if y != p.id {
                let key = (p.id.min(y), p.id.max(y));
                let labels = edges.entry(key).or_default();
                if !labels.contains(&i) {
                    labels.push(i);
                }
            }
        }
    }
    for labels in edges.values_mut() {
        labels.sort_unstable();
    }
    ExchangeGraph {
        vertex_count: g.points().len(),
        edges,
    }
}

pub fn is_standard(g: &CartanGraph) -> bool {
    g.points().windows(2).all(|w| w[0].gcm == w[1].gcm)
}

/// Witness that a point has a good A4 neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A4Witness {
    /// Relabeling under which the defining conditions hold: canonical index
    /// `m` corresponds to actual vertex `perm[m]`.
    pub perm: Vec<usize>,
    pub case: u8,
    pub a: i64,
    pub b: i64,
}

/// The Cartan matrix of point `x` read in permuted coordinates: entry
/// `(j, k)` is `a^x_{perm(j), perm(k)}`.
fn gcm_under(g: &CartanGraph, x: usize, perm: &[usize]) -> GeneralizedCartanMatrix {
    let n = perm.len();
    let mut rows = vec![vec![0i64; n]; n];
    for j in 0..n {
        for k in 0..n {
            rows[j][k] = g.point(x).gcm.entry(perm[j], perm[k]);
        }
    }
    GeneralizedCartanMatrix::from_rows(rows)
}

/// A4 with one off-diagonal entry replaced.
fn a4_with(pos: (usize, usize), value: i64) -> GeneralizedCartanMatrix {
    let mut rows = GeneralizedCartanMatrix::a4().rows().to_vec();
    rows[pos.0][pos.1] = value;
    GeneralizedCartanMatrix::from_rows(rows)
}

pub fn good_a4_at(g: &CartanGraph, x: usize) -> Option<A4Witness> {
    if g.theta() != 4 {
        return None;
    }
    let a4 = GeneralizedCartanMatrix::a4();
    // The fixed matrix demanded of r_3(X): D4-like with rows 2,3,4 mutually
    // linked.
    let at_r3 = GeneralizedCartanMatrix::from_rows(vec![
        vec![2, -1, 0, 0],
        vec![-1, 2, -1, -1],
        vec![0, -1, 2, -1],
        vec![0, -1, -1, 2],
    ]);
    for perm in permutations(4) {
        let r = |y: usize, m: usize| g.neighbor(y, perm[m]);
        if gcm_under(g, x, &perm) != a4 || gcm_under(g, r(x, 0), &perm) != a4 {
            continue;
        }
        if gcm_under(g, r(x, 2), &perm) != at_r3 {
            continue;
        }
        let m2 = gcm_under(g, r(x, 1), &perm);
        let m4 = gcm_under(g, r(x, 3), &perm);
        let a = -m2.entry(2, 3);
        let b = -m4.entry(2, 1);
        if a < 1 || b < 1 || m2 != a4_with((2, 3), -a) || m4 != a4_with((2, 1), -b) {
            continue;
        }
        let case = if (a, b) == (2, 1) || (a, b) == (2, 2) {
            1
        } else if (a, b) == (1, 2) {
            // a_{24} at r_1 r_3(X) must be -1.
            let y = r(r(x, 2), 0);
            if g.point(y).gcm.entry(perm[1], perm[3]) != -1 {
                continue;
            }
            2
        } else if (a, b) == (1, 1) {
            // a_{14} = a_{41} in {0, -1} at r_2 r_3(X).
            let y = r(r(x, 2), 1);
            let e14 = g.point(y).gcm.entry(perm[0], perm[3]);
            let e41 = g.point(y).gcm.entry(perm[3], perm[0]);
            if e14 != e41 || !(e14 == 0 || e14 == -1) {
                continue;
            }
            3
        } else {
            continue;
        };
        return Some(A4Witness { perm, case, a, b });
    }
    None
}

pub fn good_b4_at(g: &CartanGraph, x: usize) -> Option<Vec<usize>> {
    if g.theta() != 4 {
        return None;
    }
    let b4 = GeneralizedCartanMatrix::b4();
    for perm in permutations(4) {
        if gcm_under(g, x, &perm) != b4 {
            continue;
        }
        if (0..4).any(|m| gcm_under(g, g.neighbor(x, perm[m]), &perm) != b4) {
            continue;
        }
        // a_{24} at r_3 r_4(X) must be -1.
        let y = g.neighbor(g.neighbor(x, perm[3]), perm[2]);
        if g.point(y).gcm.entry(perm[1], perm[3]) != -1 {
            continue;
        }
        return Some(perm);
    }
    None
}

/// Outcome of the good-neighborhood dichotomy for a finite rank-4 graph:
/// either the graph is standard with a finite-type Cartan matrix, or some
/// point carries a good A4 or B4 neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeighborhoodReport {
    StandardOfFiniteType(&'static str),
    GoodA4 { point: usize, witness: A4Witness },
    GoodB4 { point: usize, perm: Vec<usize> },
    Violation,
}

pub fn check_neighborhood_dichotomy(g: &CartanGraph) -> NeighborhoodReport {
    if is_standard(g) {
        return match g.point(g.origin()).gcm.finite_type_rank4() {
            Some(name) => NeighborhoodReport::StandardOfFiniteType(name),
            None => NeighborhoodReport::Violation,
        };
    }
    for p in g.points() {
        if let Some(witness) = good_a4_at(g, p.id) {
            return NeighborhoodReport::GoodA4 {
                point: p.id,
                witness,
            };
        }
        if let Some(perm) = good_b4_at(g, p.id) {
            return NeighborhoodReport::GoodB4 { point: p.id, perm };
        }
    }
    NeighborhoodReport::Violation
}
