//! The exterior-times-divided-power algebra A = E(v) (x) G(w) over Z_p, with
//! |v| = 2m+1 and |gamma_1(w)| = 2mp+2, carrying:
//!   mu       the product, (v^a g_i)(v^b g_j) = C(i+j, i) v^(a+b) g_(i+j), v^2 = 0
//!   delta2   the coproduct, splitting both the v exponent and the gamma index
//!   delta_p  the higher coproduct of arity p and degree p-2, sending g_j to
//!            the sum of v g_(k_1) | ... | v g_(k_p) over k_1+...+k_p = j-1
//! together with the iterated coproducts f^n (left-leaning) and g^n
//! (right-leaning). These are the structure maps certified by the checker
//! module. The factor list for H_*(K(Z,3); Z_p) instantiates m = p^i.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{BinomTable, Prime};
use crate::tensor::{BasisElt, Element, GradedMap, TensorWord};

/// Ambient parameters: the prime p and the integer m >= 1 fixing the degrees
/// |v| = 2m+1 and |gamma_1| = 2mp+2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StructureParams {
    pub p: Prime,
    pub m: u64,
}

impl StructureParams {
    pub fn new(p: Prime, m: u64) -> Result<StructureParams> {
        if m < 1 {
            return Err(Error::OutOfRange("m must be >= 1".into()));
        }
        Ok(StructureParams { p, m })
    }

    pub fn deg_v(&self) -> i64 {
        2 * self.m as i64 + 1
    }

    pub fn deg_gamma1(&self) -> i64 {
        2 * self.m as i64 * self.p.get() as i64 + 2
    }

    /// The basis monomial v^i gamma_j with its degree.
    pub fn basis(&self, v_exp: u8, gamma_idx: u32) -> BasisElt {
        assert!(v_exp <= 1, "v^2 = 0: exponent must be 0 or 1");
        BasisElt {
            v_exp,
            gamma_idx,
            degree: v_exp as i64 * self.deg_v() + gamma_idx as i64 * self.deg_gamma1(),
        }
    }

    pub fn unit(&self) -> BasisElt {
        self.basis(0, 0)
    }

    /// All basis monomials with gamma index at most max_j, in canonical order.
    pub fn basis_up_to(&self, max_j: u32) -> Vec<BasisElt> {
        let mut out = Vec::with_capacity(2 * (max_j as usize + 1));
        for v in 0..=1u8 {
            for j in 0..=max_j {
                out.push(self.basis(v, j));
            }
        }
        out
    }
}

/// Which structure map a corruption targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorruptTarget {
    Delta2,
    DeltaP,
}

/// A single-coefficient corruption: on one chosen basis input, add `delta` to
/// the coefficient of one chosen output term (by index in canonical order).
#[derive(Clone, Copy, Debug)]
pub struct Corruption {
    pub target: CorruptTarget,
    pub input: BasisElt,
    pub term_index: usize,
    pub delta: u64,
}

/// The structure maps for one (p, m).
#[derive(Clone)]
pub struct HopfAinfStructure {
    pub params: StructureParams,
    pub mu: GradedMap,
    pub delta2: GradedMap,
    pub delta_p: GradedMap,
    binom: Arc<BinomTable>,
}

/// Binomial table bound: covers gamma indices through products and splits.
const BINOM_MAX: usize = 160;

impl HopfAinfStructure {
    pub fn new(params: StructureParams) -> HopfAinfStructure {
        Self::build(params, None)
    }

    /// Same structure with one coefficient knocked off, for mutation tests.
    pub fn corrupted(params: StructureParams, c: Corruption) -> HopfAinfStructure {
        Self::build(params, Some(c))
    }

    fn build(params: StructureParams, corruption: Option<Corruption>) -> HopfAinfStructure {
        let p = params.p;
        let binom = Arc::new(BinomTable::new(p, BINOM_MAX));

        let mu = {
            let binom = binom.clone();
            GradedMap::from_rule("mu", 2, 1, 0, p, move |w: &TensorWord| {
                let (x, y) = (w.0[0], w.0[1]);
                let mut out = Element::zero(p, 1);
                if x.v_exp + y.v_exp >= 2 {
                    return out; // v^2 = 0
                }
                // Passing gamma factors across v costs nothing: they are even.
                let c = binom.get((x.gamma_idx + y.gamma_idx) as u64, x.gamma_idx as u64);
                let prod = params.basis(x.v_exp + y.v_exp, x.gamma_idx + y.gamma_idx);
                out.add_term(&TensorWord(vec![prod]), c as i64);
                out
            })
        };

        let delta2_clean = GradedMap::from_rule("delta2", 1, 2, 0, p, move |w: &TensorWord| {
            let x = w.0[0];
            let mut out = Element::zero(p, 2);
            for k in 0..=x.v_exp {
                for l in 0..=x.gamma_idx {
                    let left = params.basis(k, l);
                    let right = params.basis(x.v_exp - k, x.gamma_idx - l);
                    out.add_term(&TensorWord(vec![left, right]), 1);
                }
            }
            out
        });

        let pp = p.get() as usize;
        let delta_p_clean = GradedMap::from_rule(
            "delta_p",
            1,
            pp,
            pp as i64 - 2,
            p,
            move |w: &TensorWord| {
                let x = w.0[0];
                let mut out = Element::zero(p, pp);
                // Every output factor carries v^(x.v_exp + 1); for v inputs that
                // is v^2 = 0, so only v_exp = 0 survives, and gamma_0 has no
                // compositions of j - 1 at all.
                if x.v_exp != 0 || x.gamma_idx == 0 {
                    return out;
                }
                let target = x.gamma_idx - 1;
                for comp in weak_compositions(target, pp) {
                    let word: Vec<BasisElt> = comp.iter().map(|&k| params.basis(1, k)).collect();
                    out.add_term(&TensorWord(word), 1);
                }
                out
            },
        );

        let apply_corruption = |map: GradedMap, c: Corruption| -> GradedMap {
            let arity_out = map.arity_out;
            let degree = map.degree;
            let name = format!("{}~", map.name);
            GradedMap::from_rule(name, 1, arity_out, degree, p, move |w: &TensorWord| {
                let mut out = map.apply(w);
                if w.0[0] == c.input {
                    let words: Vec<TensorWord> = out.terms().map(|(t, _)| t.clone()).collect();
                    if let Some(word) = words.get(c.term_index % words.len().max(1)) {
                        out.add_term(word, c.delta as i64);
                    }
                }
                out
            })
        };

        let (delta2, delta_p) = match corruption {
            Some(c) if c.target == CorruptTarget::Delta2 => {
                (apply_corruption(delta2_clean, c).cached(), delta_p_clean.cached())
            }
            Some(c) => (delta2_clean.cached(), apply_corruption(delta_p_clean, c).cached()),
            None => (delta2_clean.cached(), delta_p_clean.cached()),
        };

        HopfAinfStructure { params, mu, delta2, delta_p, binom }
    }

    pub fn prime(&self) -> Prime {
        self.params.p
    }

    pub fn binom(&self) -> &BinomTable {
        &self.binom
    }

    pub fn binom_arc(&self) -> Arc<BinomTable> {
        self.binom.clone()
    }

    /// Product of two basis monomials.
    pub fn mul(&self, x: BasisElt, y: BasisElt) -> Element {
        self.mu.apply(&TensorWord(vec![x, y]))
    }

    /// The left-leaning iterated coproduct (delta (x) 1 (x) ... ) ... delta,
    /// arity 1 -> n.
    pub fn f_n(&self, n: usize) -> Result<GradedMap> {
        if n < 2 {
            return Err(Error::ArityMismatch("iterated coproduct needs n >= 2".into()));
        }
        let mut acc = self.delta2.clone();
        for stage in 2..n {
            acc = self.delta2.extend(0, stage - 1).compose(&acc)?;
        }
        Ok(acc.cached())
    }

    /// The right-leaning iterated coproduct (... (x) 1 (x) delta) ... delta.
    pub fn g_n(&self, n: usize) -> Result<GradedMap> {
        if n < 2 {
            return Err(Error::ArityMismatch("iterated coproduct needs n >= 2".into()));
        }
        let mut acc = self.delta2.clone();
        for stage in 2..n {
            acc = self.delta2.extend(stage - 1, 0).compose(&acc)?;
        }
        Ok(acc.cached())
    }

    /// The nonzero higher coproducts, keyed by arity.
    pub fn psi(&self, k: usize) -> Option<&GradedMap> {
        if k == 2 {
            Some(&self.delta2)
        } else if k == self.params.p.get() as usize {
            Some(&self.delta_p)
        } else {
            None
        }
    }
}

/// All weak compositions of `total` into `parts` nonnegative summands.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, idx: usize, left: u32) {
        if idx + 1 == cur.len() {
            cur[idx] = left;
            out.push(cur.clone());
            return;
        }
        for take in 0..=left {
            cur[idx] = take;
            rec(out, cur, idx + 1, left - take);
        }
    }
    if parts == 0 {
        return out;
    }
    rec(&mut out, &mut cur, 0, total);
    out
}

/// The first `count` tensor factors of the mod-p homology of K(Z, 3):
/// the i-th factor has m = p^i, so |v_i| = 2 p^i + 1 and |gamma_1| = 2 p^(i+1) + 2.
/// Errors once p^i no longer fits the degree arithmetic.
pub fn em_factors_n3(p: Prime, count: usize) -> Result<Vec<StructureParams>> {
    let mut out = Vec::with_capacity(count);
    let mut m = 1u64;
    for _ in 0..count {
        // 2 m p + 2 must stay inside i64 for this factor's degrees.
        let mp = m
            .checked_mul(p.get())
            .filter(|&mp| mp <= (i64::MAX as u64 - 2) / 2)
            .ok_or_else(|| Error::OutOfRange(format!("factor degrees overflow at m = {m}")))?;
        out.push(StructureParams { p, m });
        m = mp;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, m: u64) -> StructureParams {
        StructureParams::new(Prime::new(p).unwrap(), m).unwrap()
    }

    fn word(s: &HopfAinfStructure, factors: &[(u8, u32)]) -> TensorWord {
        TensorWord(factors.iter().map(|&(v, j)| s.params.basis(v, j)).collect())
    }

    #[test]
    fn degrees_match_parameters() {
        let pr = params(3, 1);
        assert_eq!(pr.deg_v(), 3);
        assert_eq!(pr.deg_gamma1(), 8);
        assert_eq!(pr.basis(1, 2).degree, 3 + 16);
        let pr2 = params(5, 1);
        assert_eq!(pr2.deg_gamma1(), 12);
    }

    #[test]
    fn mul_examples() {
        let s = HopfAinfStructure::new(params(3, 1));
        // gamma_1 * gamma_1 = C(2,1) gamma_2 = 2 gamma_2.
        let out = s.mul(s.params.basis(0, 1), s.params.basis(0, 1));
        assert_eq!(out.coeff(&word(&s, &[(0, 2)])), 2);
        // v * v = 0.
        assert!(s.mul(s.params.basis(1, 0), s.params.basis(1, 0)).is_zero());
        // Unit acts trivially.
        let x = s.params.basis(1, 2);
        assert_eq!(s.mul(s.params.unit(), x).coeff(&TensorWord(vec![x])), 1);
        assert_eq!(s.mul(x, s.params.unit()).coeff(&TensorWord(vec![x])), 1);
        // gamma_1 * gamma_2 = C(3,1) gamma_3 = 0 mod 3.
        assert!(s.mul(s.params.basis(0, 1), s.params.basis(0, 2)).is_zero());
    }

    #[test]
    fn delta2_examples() {
        let s = HopfAinfStructure::new(params(3, 1));
        let dv = s.delta2.apply(&word(&s, &[(1, 0)]));
        assert_eq!(dv.term_count(), 2);
        assert_eq!(dv.coeff(&word(&s, &[(1, 0), (0, 0)])), 1);
        assert_eq!(dv.coeff(&word(&s, &[(0, 0), (1, 0)])), 1);
        let d1 = s.delta2.apply(&word(&s, &[(0, 0)]));
        assert_eq!(d1.term_count(), 1);
        assert_eq!(d1.coeff(&word(&s, &[(0, 0), (0, 0)])), 1);
        let dg2 = s.delta2.apply(&word(&s, &[(0, 2)]));
        assert_eq!(dg2.term_count(), 3);
        for (k, l) in [(0u32, 2u32), (1, 1), (2, 0)] {
            assert_eq!(dg2.coeff(&word(&s, &[(0, k), (0, l)])), 1);
        }
    }

    #[test]
    fn delta_p_examples() {
        let s = HopfAinfStructure::new(params(3, 1));
        // delta_p(gamma_1) = v|v|v.
        let d = s.delta_p.apply(&word(&s, &[(0, 1)]));
        assert_eq!(d.term_count(), 1);
        assert_eq!(d.coeff(&word(&s, &[(1, 0), (1, 0), (1, 0)])), 1);
        // delta_p(1) = 0 and delta_p(v gamma_j) = 0.
        assert!(s.delta_p.apply(&word(&s, &[(0, 0)])).is_zero());
        for j in 0..5 {
            assert!(s.delta_p.apply(&word(&s, &[(1, j)])).is_zero());
        }
        // delta_3(gamma_2): the three placements of gamma_1 next to v's.
        let d2 = s.delta_p.apply(&word(&s, &[(0, 2)]));
        assert_eq!(d2.term_count(), 3);
        assert_eq!(d2.coeff(&word(&s, &[(1, 1), (1, 0), (1, 0)])), 1);
        assert_eq!(d2.coeff(&word(&s, &[(1, 0), (1, 1), (1, 0)])), 1);
        assert_eq!(d2.coeff(&word(&s, &[(1, 0), (1, 0), (1, 1)])), 1);
    }

    #[test]
    fn delta_p_term_count_is_composition_count() {
        for (pv, mv) in [(3u64, 1u64), (5, 1)] {
            let s = HopfAinfStructure::new(params(pv, mv));
            let p = pv as u64;
            for j in 1..=10u32 {
                let d = s.delta_p.apply(&TensorWord(vec![s.params.basis(0, j)]));
                let expect = crate::field::binom_nat((j - 1) as u64 + p - 1, p - 1).unwrap();
                assert_eq!(d.term_count() as u128, expect, "p={pv}, j={j}");
            }
        }
    }

    #[test]
    fn iterated_coproduct_examples() {
        let s = HopfAinfStructure::new(params(3, 1));
        // f^2 is the coproduct itself.
        let f2 = s.f_n(2).unwrap();
        let x = word(&s, &[(0, 2)]);
        assert_eq!(f2.apply(&x), s.delta2.apply(&x));
        // f^3(v) distributes v over three slots.
        let f3 = s.f_n(3).unwrap();
        let fv = f3.apply(&word(&s, &[(1, 0)]));
        assert_eq!(fv.term_count(), 3);
        for t in 0..3usize {
            let mut fs = vec![(0u8, 0u32); 3];
            fs[t] = (1, 0);
            assert_eq!(fv.coeff(&word(&s, &fs)), 1);
        }
        // f^n(1) = 1 | ... | 1.
        let f4 = s.f_n(4).unwrap();
        let u = f4.apply(&word(&s, &[(0, 0)]));
        assert_eq!(u.term_count(), 1);
        assert!(s.f_n(1).is_err());
    }

    #[test]
    fn f_equals_g_on_small_basis() {
        for (pv, mv) in [(3u64, 1u64), (5, 1)] {
            let s = HopfAinfStructure::new(params(pv, mv));
            for n in 2..=(pv as usize) {
                let f = s.f_n(n).unwrap();
                let g = s.g_n(n).unwrap();
                for x in s.params.basis_up_to(8) {
                    let w = TensorWord(vec![x]);
                    assert_eq!(f.apply(&w), g.apply(&w), "n={n}, x={x}");
                }
            }
        }
    }

    #[test]
    fn factor_parameters() {
        let p = Prime::new(3).unwrap();
        let fs = em_factors_n3(p, 3).unwrap();
        assert_eq!(fs[0].m, 1);
        assert_eq!((fs[0].deg_v(), fs[0].deg_gamma1()), (3, 8));
        assert_eq!(fs[1].m, 3);
        assert_eq!((fs[1].deg_v(), fs[1].deg_gamma1()), (7, 20));
        assert_eq!(fs[2].m, 9);
        let p5 = Prime::new(5).unwrap();
        assert_eq!(em_factors_n3(p5, 1).unwrap()[0].m, 1);
        assert!(em_factors_n3(p5, 40).is_err());
    }

    #[test]
    fn corruption_changes_exactly_one_output() {
        let pr = params(3, 1);
        let clean = HopfAinfStructure::new(pr);
        let target = pr.basis(0, 2);
        let bad = HopfAinfStructure::corrupted(
            pr,
            Corruption { target: CorruptTarget::Delta2, input: target, term_index: 1, delta: 1 },
        );
        let w = TensorWord(vec![target]);
        assert_ne!(clean.delta2.apply(&w), bad.delta2.apply(&w));
        let other = TensorWord(vec![pr.basis(0, 1)]);
        assert_eq!(clean.delta2.apply(&other), bad.delta2.apply(&other));
        assert_eq!(clean.delta_p.apply(&w), bad.delta_p.apply(&w));
    }

    #[test]
    fn weak_composition_enumeration() {
        assert_eq!(weak_compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(weak_compositions(1, 3).len(), 3);
        assert_eq!(weak_compositions(4, 3).len(), 15); // C(6, 2)
        assert!(weak_compositions(2, 0).is_empty());
    }
}
