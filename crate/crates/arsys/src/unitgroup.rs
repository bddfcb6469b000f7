//! Exact arithmetic in a finitely generated abelian model of the unit group
//! `k*` of a field of characteristic `p`.
//!
//! Elements are exponent vectors over a declared set of generators: torsion
//! generators of order `d >= 2` with `p` not dividing `d`, and free generators
//! (order 0). Finite orders must be pairwise coprime because the torsion
//! subgroup of `k*` is locally cyclic (`x^n = 1` has at most `n` roots).
//!
//! When `p != 2` the unit `-1` is the unique element of order 2: a dedicated
//! generator at index 0 when every declared order is odd, and otherwise the
//! `d/2`-th power of the (necessarily unique) even-order generator. When
//! `p = 2` the token `-1` collapses to the identity.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub const SIGN_NAME: &str = "-1";

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("characteristic {0} is neither 0 nor prime")]
    BadCharacteristic(u64),
    #[error("generator {name:?} has invalid order {order} (need 0 or >= 2)")]
    BadOrder { name: String, order: u64 },
    #[error("generator {name:?} has order {order} divisible by the characteristic {p}")]
    OrderDivisibleByChar { name: String, order: u64, p: u64 },
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("generator name {0:?} is reserved")]
    ReservedName(String),
    #[error("generator orders {0} and {1} are not coprime; field torsion is locally cyclic")]
    NonCoprimeOrders(u64, u64),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("operands belong to different group specs")]
    SpecMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    /// 0 means infinite order.
    pub order: u64,
}

#[derive(Debug, PartialEq, Eq)]
struct SpecData {
    p: u64,
    generators: Vec<Generator>,
    sign_index: Option<usize>,
    sign_exps: Vec<i64>,
}

/// Presentation of the ambient unit group. Cheap to clone.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    inner: Arc<SpecData>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}
impl Eq for GroupSpec {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupSpec {
    /// Builds a spec from user generators. When `p != 2` and every declared
    /// order is odd, a sign generator is inserted automatically at index 0;
    /// an even-order generator instead supplies `-1` as one of its powers.
    pub fn new(p: u64, user_generators: &[(&str, u64)]) -> Result<GroupSpec, GroupError> {
        if p != 0 && !is_prime(p) {
            return Err(GroupError::BadCharacteristic(p));
        }
        for (i, &(name, order)) in user_generators.iter().enumerate() {
            if name == SIGN_NAME || name == "1" {
                return Err(GroupError::ReservedName(name.to_string()));
            }
            if order == 1 {
                return Err(GroupError::BadOrder {
                    name: name.to_string(),
                    order,
                });
            }
            if user_generators[..i].iter().any(|&(n, _)| n == name) {
                return Err(GroupError::DuplicateName(name.to_string()));
            }
            if p != 0 && order != 0 && order % p == 0 {
                return Err(GroupError::OrderDivisibleByChar {
                    name: name.to_string(),
                    order,
                    p,
                });
            }
            for &(_, earlier) in &user_generators[..i] {
                if earlier != 0 && order != 0 && gcd(earlier, order) != 1 {
                    return Err(GroupError::NonCoprimeOrders(earlier, order));
                }
            }
        }
        let even = user_generators
            .iter()
            .position(|&(_, d)| d != 0 && d % 2 == 0);
        let mut generators = Vec::new();
        let mut sign_index = None;
        if p != 2 && even.is_none() {
            generators.push(Generator {
                name: SIGN_NAME.to_string(),
                order: 2,
            });
            sign_index = Some(0);
        }
        for &(name, order) in user_generators {
            generators.push(Generator {
                name: name.to_string(),
                order,
            });
        }
        let mut sign_exps = vec![0i64; generators.len()];
        if let Some(i) = sign_index {
            sign_exps[i] = 1;
        } else if p != 2 {
            let j = even.expect("p != 2 without sign generator implies an even order");
            sign_exps[j] = (user_generators[j].1 / 2) as i64;
        }
        Ok(GroupSpec {
            inner: Arc::new(SpecData {
                p,
                generators,
                sign_index,
                sign_exps,
            }),
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn generators(&self) -> &[Generator] {
        &self.inner.generators
    }

    pub fn sign_index(&self) -> Option<usize> {
        self.inner.sign_index
    }

    pub fn identity(&self) -> FieldUnit {
        FieldUnit {
            spec: self.clone(),
            exps: vec![0; self.inner.generators.len()],
        }
    }

    /// The unit `-1`; equals the identity when `p = 2`.
    pub fn sign(&self) -> FieldUnit {
        FieldUnit {
            spec: self.clone(),
            exps: self.inner.sign_exps.clone(),
        }
    }

    pub fn generator_unit(&self, name: &str) -> Result<FieldUnit, GroupError> {
        let idx = self
            .inner
            .generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))?;
        let mut u = self.identity();
        u.exps[idx] = 1;
        Ok(u.canonicalized())
    }

    pub fn unit_from_exponents(&self, exps: Vec<i64>) -> FieldUnit {
        assert_eq!(exps.len(), self.inner.generators.len());
        FieldUnit { spec: self.clone(), exps }.canonicalized()
    }
}

/// Order of a unit: least `d >= 1` with `u^d = 1`, or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

/// An element of `k*` in canonical form (torsion exponents in `[0, d)`).
#[derive(Debug, Clone)]
pub struct FieldUnit {
    spec: GroupSpec,
    exps: Vec<i64>,
}

impl PartialEq for FieldUnit {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.exps == other.exps
    }
}
impl Eq for FieldUnit {}

impl std::hash::Hash for FieldUnit {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl PartialOrd for FieldUnit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldUnit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl FieldUnit {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    fn canonicalized(mut self) -> FieldUnit {
        for (e, g) in self.exps.iter_mut().zip(self.spec.generators()) {
            if g.order > 0 {
                *e = e.rem_euclid(g.order as i64);
            }
        }
        self
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn combine(&self, other: &FieldUnit) -> Result<FieldUnit, GroupError> {
        if self.spec != other.spec {
            return Err(GroupError::SpecMismatch);
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldUnit {
            spec: self.spec.clone(),
            exps,
        }
        .canonicalized())
    }

    /// Infallible product for units known to share a spec.
    pub fn mul(&self, other: &FieldUnit) -> FieldUnit {
        self.combine(other).expect("spec mismatch")
    }

    pub fn inverse(&self) -> FieldUnit {
        FieldUnit {
            spec: self.spec.clone(),
            exps: self.exps.iter().map(|e| -e).collect(),
        }
        .canonicalized()
    }

    pub fn power(&self, k: i64) -> FieldUnit {
        FieldUnit {
            spec: self.spec.clone(),
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
        .canonicalized()
    }

    pub fn element_order(&self) -> Order {
        let mut ord: u64 = 1;
        for (&e, g) in self.exps.iter().zip(self.spec.generators()) {
            if g.order == 0 {
                if e != 0 {
                    return Order::Infinite;
                }
            } else if e != 0 {
                let comp = g.order / gcd(e.unsigned_abs(), g.order);
                ord = lcm(ord, comp);
            }
        }
        Order::Finite(ord)
    }

    /// Least `m >= 0` with `self^m = target`, or `None` if no such power.
    pub fn min_power_hitting(&self, target: &FieldUnit) -> Option<u64> {
        if self.spec != target.spec {
            return None;
        }
        // Congruence state: m = residue (mod modulus), optionally pinned to a
        // fixed value by a free component.
        let mut residue: i128 = 0;
        let mut modulus: i128 = 1;
        let mut fixed: Option<i128> = None;
        for ((&e, &t), g) in self
            .exps
            .iter()
            .zip(&target.exps)
            .zip(self.spec.generators())
        {
            if g.order == 0 {
                if e == 0 {
                    if t != 0 {
                        return None;
                    }
                } else {
                    if t % e != 0 {
                        return None;
                    }
                    let m = (t / e) as i128;
                    if m < 0 || fixed.is_some_and(|f| f != m) {
                        return None;
                    }
                    fixed = Some(m);
                }
            } else {
                let d = g.order as i128;
                let (r, md) = solve_congruence(e as i128, t as i128, d)?;
                let merged = merge_congruences(residue, modulus, r, md)?;
                residue = merged.0;
                modulus = merged.1;
            }
        }
        match fixed {
            Some(m) => (m % modulus == residue).then_some(m as u64),
            None => Some(residue as u64),
        }
    }

    /// All `x` with `x^k = self`, for `k != 0`. Finitely many since free
    /// components divide exactly; torsion components contribute
    /// `gcd(k, d)` solutions each when solvable.
    pub fn kth_power_preimages(&self, k: i64) -> Vec<FieldUnit> {
        assert!(k != 0);
        let mut component_choices: Vec<Vec<i64>> = Vec::new();
        for (&t, g) in self.exps.iter().zip(self.spec.generators()) {
            if g.order == 0 {
                if t % k != 0 {
                    return Vec::new();
                }
                component_choices.push(vec![t / k]);
            } else {
                let d = g.order as i128;
                let kk = (k as i128).rem_euclid(d);
                if kk == 0 {
                    if t != 0 {
                        return Vec::new();
                    }
                    component_choices.push((0..g.order as i64).collect());
                    continue;
                }
                match solve_congruence(kk, t as i128, d) {
                    None => return Vec::new(),
                    Some((r, md)) => {
                        let choices = (0..)
                            .map(|i| (r + i * md) as i64)
                            .take_while(|&x| (x as i128) < d)
                            .collect();
                        component_choices.push(choices);
                    }
                }
            }
        }
        let mut exps_list: Vec<Vec<i64>> = vec![Vec::new()];
        for choices in &component_choices {
            let mut next = Vec::new();
            for partial in &exps_list {
                for &c in choices {
                    let mut e = partial.clone();
                    e.push(c);
                    next.push(e);
                }
            }
            exps_list = next;
        }
        exps_list
            .into_iter()
            .map(|exps| self.spec.unit_from_exponents(exps))
            .collect()
    }

    /// Whether the quantum integer `(k)_q = 1 + q + ... + q^{k-1}` vanishes.
    pub fn qint_vanishes(&self, k: u64) -> bool {
        assert!(k >= 1);
        let p = self.spec.characteristic();
        if self.is_identity() {
            p > 0 && k % p == 0
        } else {
            self.power(k as i64).is_identity()
        }
    }

    /// Renders as a signed monomial over the generator names, e.g. `-z^2`.
    pub fn display(&self) -> String {
        let mut neg = false;
        let mut parts = Vec::new();
        for (&e, (idx, g)) in self
            .exps
            .iter()
            .zip(self.spec.generators().iter().enumerate())
        {
            if e == 0 {
                continue;
            }
            if Some(idx) == self.spec.sign_index() {
                neg = true;
            } else if e == 1 {
                parts.push(g.name.clone());
            } else {
                parts.push(format!("{}^{}", g.name, e));
            }
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for FieldUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Solves `a*m = t (mod d)`, returning `(residue, modulus)` for the solution
/// set, or `None` if unsolvable.
fn solve_congruence(a: i128, t: i128, d: i128) -> Option<(i128, i128)> {
    let a = a.rem_euclid(d);
    let t = t.rem_euclid(d);
    if a == 0 {
        return (t == 0).then_some((0, 1));
    }
    let (g, inv, _) = egcd(a, d);
    if t % g != 0 {
        return None;
    }
    let md = d / g;
    let r = ((t / g) * inv).rem_euclid(md);
    Some((r, md))
}

/// Intersects `m = r1 (mod m1)` with `m = r2 (mod m2)`.
fn merge_congruences(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let (g, x, _) = egcd(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let lcm = m1 / g * m2;
    let step = ((r2 - r1) / g * x).rem_euclid(m2 / g);
    Some(((r1 + m1 * step).rem_euclid(lcm), lcm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_p5() -> GroupSpec {
        GroupSpec::new(5, &[("z", 3), ("g", 0)]).unwrap()
    }

    #[test]
    fn inverse_law() {
        let s = spec_p5();
        let a = s
            .generator_unit("z")
            .unwrap()
            .mul(&s.generator_unit("g").unwrap().power(-2))
            .mul(&s.sign());
        assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn order_relations() {
        let s = spec_p5();
        let z = s.generator_unit("z").unwrap();
        assert!(z.power(2).mul(&z).is_identity());
        assert!(s.sign().mul(&s.sign()).is_identity());
        assert_eq!(z.power(-1), z.power(2));
        assert_eq!(s.generator_unit("g").unwrap().power(0), s.identity());
        assert_eq!(s.sign().power(3), s.sign());
    }

    #[test]
    fn sign_collapses_in_char_two() {
        let s = GroupSpec::new(2, &[("q", 0)]).unwrap();
        assert!(s.sign().is_identity());
    }

    #[test]
    fn element_orders() {
        let s = spec_p5();
        assert_eq!(s.identity().element_order(), Order::Finite(1));
        // -z has order 6 (brute force: least d in 1..=12 with (-z)^d = 1).
        let mz = s.sign().mul(&s.generator_unit("z").unwrap());
        let brute = (1..=12)
            .find(|&d| mz.power(d).is_identity())
            .unwrap();
        assert_eq!(brute, 6);
        assert_eq!(mz.element_order(), Order::Finite(6));
        assert_eq!(
            s.generator_unit("g").unwrap().element_order(),
            Order::Infinite
        );
    }

    #[test]
    fn min_power_examples() {
        let s = spec_p5();
        let z = s.generator_unit("z").unwrap();
        let g = s.generator_unit("g").unwrap();
        assert_eq!(z.min_power_hitting(&z.power(2)), Some(2));
        assert_eq!(g.min_power_hitting(&g.power(-3)), None);
        assert_eq!(s.identity().min_power_hitting(&s.sign()), None);
        assert_eq!(s.identity().min_power_hitting(&s.identity()), Some(0));
        // Mixed torsion+free component.
        let u = z.mul(&g);
        assert_eq!(u.min_power_hitting(&u.power(7)), Some(7));
    }

    #[test]
    fn qint_examples() {
        let s = spec_p5();
        assert!(s.sign().qint_vanishes(2));
        assert!(!s.sign().qint_vanishes(1));
        let s3 = GroupSpec::new(3, &[]).unwrap();
        assert!(s3.identity().qint_vanishes(3));
        assert!(!s3.identity().qint_vanishes(2));
        assert!(!spec_p5().generator_unit("g").unwrap().qint_vanishes(4));
    }

    #[test]
    fn qint_matches_evaluation_in_f25() {
        // F_25 = F_5[x]/(x^2 + x + 1); the class of x is a primitive cube
        // root of unity and -1 is 4. Quantum integers are summed literally.
        type F25 = (u64, u64); // a + b*x with a, b in F_5
        fn mul(u: F25, v: F25) -> F25 {
            // (a + bx)(c + dx) = ac + (ad + bc)x + bd*x^2, x^2 = -x - 1.
            let (a, b) = u;
            let (c, d) = v;
            (((a * c + 4 * b * d) % 5), ((a * d + b * c + 4 * b * d) % 5))
        }
        fn add(u: F25, v: F25) -> F25 {
            ((u.0 + v.0) % 5, (u.1 + v.1) % 5)
        }
        let s = spec_p5();
        let z = s.generator_unit("z").unwrap();
        let cases: Vec<(FieldUnit, F25)> = vec![
            (s.identity(), (1, 0)),
            (s.sign(), (4, 0)),
            (z.clone(), (0, 1)),
            (s.sign().mul(&z), (0, 4)),
            (z.power(2), (4, 4)),
        ];
        for (q, qf) in &cases {
            let mut term = (1, 0);
            let mut sum = (0, 0);
            for k in 1..=50u64 {
                sum = add(sum, term);
                term = mul(term, *qf);
                assert_eq!(q.qint_vanishes(k), sum == (0, 0), "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn power_preimages() {
        let s = spec_p5();
        let z = s.generator_unit("z").unwrap();
        let g = s.generator_unit("g").unwrap();
        // Square roots of z: z^2 and -z^2 (sign component is free mod 2).
        let mut roots = z.kth_power_preimages(2);
        roots.sort();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.power(2), z);
        }
        // Free component demands exact division.
        assert_eq!(g.power(3).kth_power_preimages(2), Vec::<FieldUnit>::new());
        assert_eq!(g.power(4).kth_power_preimages(2).len(), 2);
        // Brute-force cross-check over the torsion part: every preimage set
        // of x^3 = 1 in <-1> x <z> has gcd(3,2)*gcd(3,3) = 3 elements.
        let cube_roots = s.identity().kth_power_preimages(3);
        assert_eq!(cube_roots.len(), 3);
        assert!(cube_roots.iter().all(|r| r.power(3).is_identity()));
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(4, &[]).is_err());
        assert!(GroupSpec::new(3, &[("z", 3)]).is_err());
        assert!(GroupSpec::new(3, &[("z", 1)]).is_err());
        assert!(GroupSpec::new(5, &[("-1", 2)]).is_err());
        assert!(GroupSpec::new(5, &[("a", 4), ("a", 3)]).is_err());
        assert!(GroupSpec::new(0, &[("q", 0)]).is_ok());
        // Orders 4 and 6 would give nine solutions of x^12 = 1 sharing a
        // square root of unity; no field allows that.
        assert!(matches!(
            GroupSpec::new(5, &[("a", 4), ("b", 6)]),
            Err(GroupError::NonCoprimeOrders(4, 6))
        ));
        assert!(GroupSpec::new(5, &[("a", 4), ("b", 3), ("q", 0)]).is_ok());
    }

    #[test]
    fn even_order_generator_supplies_sign() {
        // In any field a primitive 4th root z satisfies z^2 = -1, so the
        // spec must not mint a second order-2 element.
        let s = GroupSpec::new(3, &[("z", 4)]).unwrap();
        let z = s.generator_unit("z").unwrap();
        assert_eq!(s.sign_index(), None);
        assert_eq!(s.sign(), z.power(2));
        assert!(!s.sign().is_identity());
        let mz = s.sign().mul(&z);
        assert_eq!(mz, z.power(3));
        assert_eq!(mz.element_order(), Order::Finite(4));
        // (2)_{-1} = 0 and (4)_z = 0 still hold.
        assert!(s.sign().qint_vanishes(2));
        assert!(z.qint_vanishes(4));
        assert!(!z.qint_vanishes(2));
        // Odd orders keep the dedicated generator.
        let odd = GroupSpec::new(3, &[("z", 5)]).unwrap();
        assert_eq!(odd.sign_index(), Some(0));
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let a = spec_p5().identity();
        let b = GroupSpec::new(7, &[]).unwrap().identity();
        assert!(a.combine(&b).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_unit() -> impl Strategy<Value = FieldUnit> {
            (0i64..2, 0i64..3, -4i64..=4).prop_map(|(s, z, g)| {
                spec_p5().unit_from_exponents(vec![s, z, g])
            })
        }

        proptest! {
            #[test]
            fn group_laws(a in arb_unit(), b in arb_unit(), c in arb_unit()) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert!(a.mul(&a.inverse()).is_identity());
            }

            #[test]
            fn powers_compose(a in arb_unit(), m in -5i64..=5, n in -5i64..=5) {
                prop_assert_eq!(a.power(m).mul(&a.power(n)), a.power(m + n));
                prop_assert_eq!(a.power(m).power(n), a.power(m * n));
            }

            #[test]
            fn element_order_is_least(a in arb_unit()) {
                if let Order::Finite(d) = a.element_order() {
                    prop_assert!(a.power(d as i64).is_identity());
                    for k in 1..d {
                        prop_assert!(!a.power(k as i64).is_identity());
                    }
                }
            }

            #[test]
            fn min_power_is_least_and_correct(a in arb_unit(), k in 0i64..=8) {
                let target = a.power(k);
                let m = a.min_power_hitting(&target)
                    .expect("a^k is always reachable") as i64;
                prop_assert!(m <= k);
                prop_assert_eq!(a.power(m), target);
                for smaller in 0..m {
                    prop_assert_ne!(a.power(smaller), a.power(m));
                }
            }

            #[test]
            fn preimages_are_exact(a in arb_unit(), k in prop::sample::select(vec![1i64, 2, 3, 4, 6])) {
                for x in a.kth_power_preimages(k) {
                    prop_assert_eq!(x.power(k), a.clone());
                }
                // The k-th power of a is always in the preimage set of a^k.
                let roots = a.power(k).kth_power_preimages(k);
                prop_assert!(roots.contains(&a));
            }
        }
    }
}
