//! Enumeration of real roots over a Cartan graph, finiteness verdicts, and
//! verification of the root-system axioms.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::cartangraph::CartanGraph;

pub const DEFAULT_MAX_POS_ROOTS: usize = 512;

pub type Root = Vec<i64>;

fn is_nonnegative(r: &[i64]) -> bool {
    r.iter().all(|&c| c >= 0)
}

fn is_nonpositive(r: &[i64]) -> bool {
    r.iter().all(|&c| c <= 0)
}

fn negated(r: &[i64]) -> Root {
    r.iter().map(|&c| -c).collect()
}

/// Coordinates past this bound mean the system is diverging; stop rather
/// than overflow (an infinite rank-2 system grows coordinates exponentially
/// while adding only two roots per generation, so a count cap alone is not
/// enough).
const MAX_COORD: i64 = 1 << 40;

/// `s_i^X` applied to a root: `beta - (sum_j a^X_{ij} beta_j) alpha_i`;
/// `None` when a coordinate leaves `[-MAX_COORD, MAX_COORD]`.
fn reflect_root(g: &CartanGraph, x: usize, i: usize, beta: &[i64]) -> Option<Root> {
    let row = &g.point(x).gcm.rows()[i];
    let coeff: i128 = row
        .iter()
        .zip(beta)
        .map(|(&a, &b)| i128::from(a) * i128::from(b))
        .sum();
    let new_i = i128::from(beta[i]) - coeff;
    if new_i.abs() > i128::from(MAX_COORD) {
        return None;
    }
    let mut out = beta.to_vec();
    out[i] = new_i as i64;
    Some(out)
}

/// Positive roots per point of a saturated finite system.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pos: Vec<BTreeSet<Root>>,
    pub iterations: usize,
}

impl RootSystemData {
    pub fn positive(&self, point: usize) -> &BTreeSet<Root> {
        &self.pos[point]
    }

    pub fn contains(&self, point: usize, root: &[i64]) -> bool {
        if is_nonnegative(root) {
            self.pos[point].contains(root)
        } else if is_nonpositive(root) {
            self.pos[point].contains(&negated(root))
        } else {
            false
        }
    }
}

#[derive(Debug, Clone)]
pub enum FinitenessVerdict {
    Finite(RootSystemData),
    /// Saturation blew past the cap; the system is presumed infinite at
    /// these limits.
    ExceededLimits {
        stage: String,
    },
    /// A root with both positive and negative coordinates appeared; the
    /// first Cartan-graph axiom fails.
    MixedSignRoot {
        point: usize,
        root: Root,
    },
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessVerdict::Finite(_))
    }
}

/// Fixpoint saturation: seed every point with `±alpha_i`, push `s_i^X(beta)`
/// to `r_i(X)` until stable.
pub fn enumerate_roots(g: &CartanGraph, max_pos_roots: usize) -> FinitenessVerdict {
    let theta = g.theta();
    let n_points = g.points().len();
    let mut sets: Vec<BTreeSet<Root>> = vec![BTreeSet::new(); n_points];
    let mut queue: VecDeque<(usize, Root)> = VecDeque::new();
    for x in 0..n_points {
        for i in 0..theta {
            let mut alpha = vec![0i64; theta];
            alpha[i] = 1;
            sets[x].insert(alpha.clone());
            sets[x].insert(negated(&alpha));
            queue.push_back((x, alpha.clone()));
            queue.push_back((x, negated(&alpha)));
        }
    }
    let mut iterations = 0usize;
    while let Some((x, beta)) = queue.pop_front() {
        iterations += 1;
        for i in 0..theta {
            let Some(gamma) = reflect_root(g, x, i, &beta) else {
                return FinitenessVerdict::ExceededLimits {
                    stage: format!("root coordinate exceeded {MAX_COORD} at point {x}"),
                };
            };
            if !is_nonnegative(&gamma) && !is_nonpositive(&gamma) {
                return FinitenessVerdict::MixedSignRoot {
                    point: x,
                    root: gamma,
                };
            }
            let y = g.neighbor(x, i);
            if sets[y].insert(gamma.clone()) {
                if sets[y].len() > 2 * max_pos_roots {
                    return FinitenessVerdict::ExceededLimits {
                        stage: format!("point {y} exceeded {max_pos_roots} positive roots"),
                    };
                }
                queue.push_back((y, gamma));
            }
        }
    }
    let pos = sets
        .into_iter()
        .map(|s| s.into_iter().filter(|r| is_nonnegative(r)).collect())
        .collect();
    FinitenessVerdict::Finite(RootSystemData { pos, iterations })
}

/// Positive roots of point `x` collected along length-increasing reduced
/// words of groupoid morphisms into `x`; independent oracle for
/// [`enumerate_roots`].
///
/// Returns the root set together with the length of the longest word
/// explored.
pub fn roots_by_reduced_words(
    g: &CartanGraph,
    x: usize,
    max_pos_roots: usize,
) -> Result<(BTreeSet<Root>, usize), String> {
    let theta = g.theta();
    let identity: Vec<Vec<i64>> = (0..theta)
        .map(|r| (0..theta).map(|c| i64::from(r == c)).collect())
        .collect();
    // Morphisms into x are pairs (domain point, integer matrix). s_i^Z maps
    // the root lattice of Z to that of r_i(Z); composing on the right
    // extends the word.
    let mut visited: HashSet<(usize, Vec<Vec<i64>>)> = HashSet::new();
    let mut frontier: Vec<(usize, Vec<Vec<i64>>)> = vec![(x, identity.clone())];
    visited.insert((x, identity));
    let mut roots: BTreeSet<Root> = BTreeSet::new();
    let word_cap = max_pos_roots * g.points().len().max(1) * 2 * theta + 16;
    let mut longest = 0usize;
    let mut length = 0usize;
    while !frontier.is_empty() {
        length += 1;
        let mut next = Vec::new();
        for (y, w) in &frontier {
            for i in 0..theta {
                // Extend w: Y -> X by s_i^Z: Z -> Y with Z = r_i(Y).
                let z = g.neighbor(*y, i);
                let s = reflection_matrix(g, z, i);
                let wz = mat_mul(w, &s);
                if visited.insert((z, wz.clone())) {
                    // Length-increasing extension: record beta = w(alpha_i).
                    let beta: Root = w.iter().map(|row| row[i]).collect();
                    debug_assert!(is_nonnegative(&beta), "reduced word produced {beta:?}");
                    roots.insert(beta);
                    if roots.len() > max_pos_roots {
                        return Err(format!(
                            "more than {max_pos_roots} roots along reduced words"
                        ));
                    }
                    next.push((z, wz));
                    longest = length;
                }
                if visited.len() > word_cap {
                    return Err(format!("more than {word_cap} morphisms explored"));
                }
            }
        }
        frontier = next;
    }
    Ok((roots, longest))
}

/// Matrix of `s_i^Z` in the root-lattice basis: columns are images of the
/// `alpha_j`.
fn reflection_matrix(g: &CartanGraph, z: usize, i: usize) -> Vec<Vec<i64>> {
    let theta = g.theta();
    let row = &g.point(z).gcm.rows()[i];
    let mut m: Vec<Vec<i64>> = (0..theta)
        .map(|r| (0..theta).map(|c| i64::from(r == c)).collect())
        .collect();
    for j in 0..theta {
        m[i][j] -= row[j];
    }
    m
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for r in 0..n {
        for c in 0..n {
            out[r][c] = (0..n).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

/// One failed check with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub witness: String,
}

/// `m_ij^X = |Delta^X ∩ (N0 alpha_i + N0 alpha_j)|`: positive roots
/// supported on `{i, j}`.
pub fn m_ij(r: &RootSystemData, x: usize, i: usize, j: usize) -> usize {
    r.positive(x)
        .iter()
        .filter(|root| {
            root.iter()
                .enumerate()
                .all(|(k, &c)| c == 0 || k == i || k == j)
        })
        .count()
}

/// Verifies the four root-system axioms at every point.
pub fn check_root_axioms(g: &CartanGraph, r: &RootSystemData) -> Vec<AxiomFailure> {
    let theta = g.theta();
    let mut failures = Vec::new();
    for p in g.points() {
        let x = p.id;
        let pos = r.positive(x);
        // (R1) every positive root is nonnegative with alpha_i among them.
        for i in 0..theta {
            let mut alpha = vec![0i64; theta];
            alpha[i] = 1;
            if !pos.contains(&alpha) {
                failures.push(AxiomFailure {
                    axiom: "R1",
                    witness: format!("alpha_{} missing at point {x}", i + 1),
                });
            }
        }
        // (R2) the only multiples of alpha_i are ±alpha_i.
        for root in pos {
            let support: Vec<usize> = root
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, _)| k)
                .collect();
            if support.len() == 1 && root[support[0]] != 1 {
                failures.push(AxiomFailure {
                    axiom: "R2",
                    witness: format!("{root:?} on the alpha_{} axis at point {x}", support[0] + 1),
                });
            }
        }
        // (R3) s_i^X maps Delta^X onto Delta^{r_i(X)}.
        for i in 0..theta {
            let y = g.neighbor(x, i);
            let image: BTreeSet<Root> = pos
                .iter()
                .flat_map(|root| {
                    let s = reflect_root(g, x, i, root)
                        .expect("verified finite systems stay within coordinate bounds");
                    let neg = negated(&s);
                    [s, neg]
                })
                .filter(|s| is_nonnegative(s))
                .collect();
            if &image != r.positive(y) {
                failures.push(AxiomFailure {
                    axiom: "R3",
                    witness: format!("s_{}^{x} image differs from roots at point {y}", i + 1),
                });
            }
        }
        // (R4) (r_i r_j)^{m_ij}(X) = X.
        for i in 0..theta {
            for j in 0..theta {
                if i == j {
                    continue;
                }
                let m = m_ij(r, x, i, j);
                let mut y = x;
                for _ in 0..m {
                    y = g.neighbor(g.neighbor(y, j), i);
                }
                if y != x {
                    failures.push(AxiomFailure {
                        axiom: "R4",
                        witness: format!(
                            "(r_{} r_{})^{m}({x}) = {y} != {x}",
                            i + 1,
                            j + 1
                        ),
                    });
                }
            }
        }
    }
    failures
}

/// Checks that `alpha_j + k alpha_i` is a root exactly for `0 <= k <= -a_ij`.
pub fn check_root_strings(g: &CartanGraph, r: &RootSystemData) -> Vec<AxiomFailure> {
    let theta = g.theta();
    let mut failures = Vec::new();
    for p in g.points() {
        let x = p.id;
        for i in 0..theta {
            for j in 0..theta {
                if i == j {
                    continue;
                }
                let aij = p.gcm.entry(i, j);
                for k in 0..=(-aij + 2) {
                    let mut root = vec![0i64; theta];
                    root[j] = 1;
                    root[i] = k;
                    let expected = k <= -aij;
                    if r.contains(x, &root) != expected {
                        failures.push(AxiomFailure {
                            axiom: "root-string",
                            witness: format!(
                                "point {x}, i={}, j={}, k={k}: membership != {expected}",
                                i + 1,
                                j + 1
                            ),
                        });
                    }
                }
            }
        }
    }
    failures
}
