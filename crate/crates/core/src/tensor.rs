//! Graded tensor words over the monomial basis v^i gamma_j, Z_p-linear
//! combinations of them, Koszul signs, and operator calculus on graded maps:
//! padding f to 1^i (x) f (x) 1^j, tensor products, sums, composition, and the
//! half-shuffle interleaving (A^n)^2 -> (A^2)^n.
//!
//! Degrees are carried on every basis factor so sign computations never need
//! ambient parameters. A map checks its own degree bookkeeping on every
//! application: each output term must have degree deg(input) + deg(map).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Prime;

/// Monomial v^i gamma_j with its total degree. Ordering is lexicographic on
/// (v_exp, gamma_idx); degree is a function of those once the ambient
/// parameters are fixed, so it does not disturb the order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisElt {
    pub v_exp: u8,
    pub gamma_idx: u32,
    pub degree: i64,
}

impl BasisElt {
    pub fn is_unit(&self) -> bool {
        self.v_exp == 0 && self.gamma_idx == 0
    }
}

impl std::fmt::Display for BasisElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.v_exp, self.gamma_idx) {
            (0, 0) => write!(f, "1"),
            (1, 0) => write!(f, "v"),
            (0, j) => write!(f, "g{j}"),
            (_, j) => write!(f, "v.g{j}"),
        }
    }
}

/// An ordered sequence of basis factors, one point of the monomial basis of
/// a tensor power.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TensorWord(pub Vec<BasisElt>);

impl TensorWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|b| b.degree).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|b| json!([b.v_exp, b.gamma_idx]))
                .collect(),
        )
    }
}

impl std::fmt::Display for TensorWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// A finite Z_p-linear combination of tensor words of one common length.
/// Zero coefficients are never stored; terms are kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    modulus: u64,
    tensor_len: usize,
    terms: BTreeMap<TensorWord, u64>,
}

impl Element {
    pub fn zero(p: Prime, tensor_len: usize) -> Element {
        Element {
            modulus: p.get(),
            tensor_len,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_raw(modulus: u64, tensor_len: usize) -> Element {
        Element {
            modulus,
            tensor_len,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(p: Prime, word: TensorWord, coeff: i64) -> Element {
        let mut e = Element::zero(p, word.len());
        e.add_term(&word, coeff);
        e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn tensor_len(&self) -> usize {
        self.tensor_len
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorWord, u64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, word: &TensorWord) -> u64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    /// Adds coeff * word, pruning the entry if it cancels to zero.
    pub fn add_term(&mut self, word: &TensorWord, coeff: i64) {
        assert_eq!(word.len(), self.tensor_len, "tensor length mismatch");
        let c = coeff.rem_euclid(self.modulus as i64) as u64;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert(0);
        *entry = (*entry + c) % self.modulus;
        if *entry == 0 {
            self.terms.remove(word);
        }
    }

    pub fn add_assign(&mut self, other: &Element) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.tensor_len != other.tensor_len {
            return Err(Error::TensorLength {
                expected: self.tensor_len,
                found: other.tensor_len,
            });
        }
        for (w, c) in other.terms() {
            self.add_term(w, c as i64);
        }
        Ok(())
    }

    pub fn scale(&self, k: i64) -> Element {
        let mut out = Element::zero_raw(self.modulus, self.tensor_len);
        for (w, c) in self.terms() {
            out.add_term(w, k * c as i64);
        }
        out
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(-1))
    }

    /// Canonical JSON form: {"k": length, "terms": [{"word": [[i,j],...], "coeff": c}]}.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(w, c)| json!({"word": w.to_json(), "coeff": c}))
            .collect();
        json!({"k": self.tensor_len, "terms": terms})
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, c)| if c == 1 { format!("({w})") } else { format!("{c}({w})") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sign of rearranging graded factors. `perm[new_pos] = old_pos`; the sign is
/// the product of (-1)^(deg a * deg b) over all pairs that cross.
pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> i64 {
    assert_eq!(degrees.len(), perm.len());
    let mut exp = 0i64;
    for s in 0..perm.len() {
        for t in (s + 1)..perm.len() {
            if perm[s] > perm[t] {
                exp += degrees[perm[s]] * degrees[perm[t]];
            }
        }
    }
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

type Rule = dyn Fn(&TensorWord) -> Element + Send + Sync;

/// A linear map A^(x k_in) -> A^(x k_out) of fixed degree, defined by a rule
/// on basis words. Applications are memoized when `cached` is set (worth it
/// for arity-1 inputs with small domains; skipped for throwaway composites).
#[derive(Clone)]
pub struct GradedMap {
    pub name: String,
    pub arity_in: usize,
    pub arity_out: usize,
    pub degree: i64,
    modulus: u64,
    rule: Arc<Rule>,
    cache: Option<Arc<Mutex<HashMap<TensorWord, Element>>>>,
}

impl std::fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GradedMap({}: {}->{} deg {})",
            self.name, self.arity_in, self.arity_out, self.degree
        )
    }
}

impl GradedMap {
    pub fn from_rule<F>(
        name: impl Into<String>,
        arity_in: usize,
        arity_out: usize,
        degree: i64,
        p: Prime,
        rule: F,
    ) -> GradedMap
    where
        F: Fn(&TensorWord) -> Element + Send + Sync + 'static,
    {
        GradedMap {
            name: name.into(),
            arity_in,
            arity_out,
            degree,
            modulus: p.get(),
            rule: Arc::new(rule),
            cache: None,
        }
    }

    /// Turns on memoization of basis-word applications.
    pub fn cached(mut self) -> GradedMap {
        if self.cache.is_none() {
            self.cache = Some(Arc::new(Mutex::new(HashMap::new())));
        }
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn identity(p: Prime, arity: usize) -> GradedMap {
        GradedMap::from_rule("id", arity, arity, 0, p, move |w| {
            let mut e = Element::zero(p, w.len());
            e.add_term(w, 1);
            e
        })
    }

    pub fn zero_map(p: Prime, arity_in: usize, arity_out: usize, degree: i64) -> GradedMap {
        GradedMap::from_rule("0", arity_in, arity_out, degree, p, move |_| {
            Element::zero(p, arity_out)
        })
    }

    /// Applies the map to a basis word, asserting arity and degree bookkeeping.
    pub fn apply(&self, word: &TensorWord) -> Element {
        assert_eq!(
            word.len(),
            self.arity_in,
            "{}: word length {} != arity {}",
            self.name,
            word.len(),
            self.arity_in
        );
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.lock().unwrap().get(word) {
                return hit.clone();
            }
        }
        let out = (self.rule)(word);
        assert_eq!(out.tensor_len(), self.arity_out, "{}: output arity", self.name);
        let want = word.degree() + self.degree;
        for (w, _) in out.terms() {
            assert_eq!(
                w.degree(),
                want,
                "{}: degree drift on input {word}: output term {w}",
                self.name
            );
        }
        if let Some(cache) = &self.cache {
            cache.lock().unwrap().insert(word.clone(), out.clone());
        }
        out
    }

    /// Linear extension to a combination.
    pub fn apply_element(&self, x: &Element) -> Element {
        let mut out = Element::zero_raw(self.modulus, self.arity_out);
        for (w, c) in x.terms() {
            for (ow, oc) in self.apply(w).terms() {
                out.add_term(ow, (c * oc) as i64);
            }
        }
        out
    }

    /// The padded map 1^(x i) (x) f (x) 1^(x j). Sliding f past the first i
    /// factors costs the Koszul sign (-1)^(deg f * deg(first i factors)).
    pub fn extend(&self, i: usize, j: usize) -> GradedMap {
        let inner = self.clone();
        let arity_in = i + self.arity_in + j;
        let arity_out = i + self.arity_out + j;
        GradedMap {
            name: format!("({})_{{{i},{j}}}", self.name),
            arity_in,
            arity_out,
            degree: self.degree,
            modulus: self.modulus,
            rule: Arc::new(move |w: &TensorWord| {
                let prefix = &w.0[..i];
                let mid = TensorWord(w.0[i..i + inner.arity_in].to_vec());
                let suffix = &w.0[i + inner.arity_in..];
                let crossed: i64 = prefix.iter().map(|b| b.degree).sum();
                let sign = if (inner.degree * crossed) % 2 == 0 { 1 } else { -1 };
                let mut out = Element::zero_raw(inner.modulus, i + inner.arity_out + suffix.len());
                for (mw, mc) in inner.apply(&mid).terms() {
                    let mut word = Vec::with_capacity(out.tensor_len());
                    word.extend_from_slice(prefix);
                    word.extend_from_slice(&mw.0);
                    word.extend_from_slice(suffix);
                    out.add_term(&TensorWord(word), sign * mc as i64);
                }
                out
            }),
            cache: None,
        }
    }

    /// g.compose(f) = g after f. Arities must chain.
    pub fn compose(&self, f: &GradedMap) -> Result<GradedMap> {
        if self.arity_in != f.arity_out {
            return Err(Error::ArityMismatch(format!(
                "{} expects {} factors, {} yields {}",
                self.name, self.arity_in, f.name, f.arity_out
            )));
        }
        if self.modulus != f.modulus {
            return Err(Error::ModulusMismatch(self.modulus, f.modulus));
        }
        let g = self.clone();
        let f = f.clone();
        Ok(GradedMap {
            name: format!("{}.{}", g.name, f.name),
            arity_in: f.arity_in,
            arity_out: g.arity_out,
            degree: g.degree + f.degree,
            modulus: g.modulus,
            rule: Arc::new(move |w: &TensorWord| g.apply_element(&f.apply(w))),
            cache: None,
        })
    }

    /// (f (x) g)(x (x) y) = (-1)^(deg g * deg x) f(x) (x) g(y).
    pub fn tensor(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let f = self.clone();
        let g = other.clone();
        Ok(GradedMap {
            name: format!("({}x{})", f.name, g.name),
            arity_in: f.arity_in + g.arity_in,
            arity_out: f.arity_out + g.arity_out,
            degree: f.degree + g.degree,
            modulus: f.modulus,
            rule: Arc::new(move |w: &TensorWord| {
                let left = TensorWord(w.0[..f.arity_in].to_vec());
                let right = TensorWord(w.0[f.arity_in..].to_vec());
                let sign = if (g.degree * left.degree()) % 2 == 0 { 1 } else { -1 };
                let fx = f.apply(&left);
                let gy = g.apply(&right);
                let mut out = Element::zero_raw(f.modulus, f.arity_out + g.arity_out);
                for (lw, lc) in fx.terms() {
                    for (rw, rc) in gy.terms() {
                        let mut word = Vec::with_capacity(out.tensor_len());
                        word.extend_from_slice(&lw.0);
                        word.extend_from_slice(&rw.0);
                        out.add_term(&TensorWord(word), sign * (lc * rc) as i64);
                    }
                }
                out
            }),
            cache: None,
        })
    }

    /// Pointwise sum; requires matching arities and degree.
    pub fn plus(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.arity_in != other.arity_in
            || self.arity_out != other.arity_out
            || self.degree != other.degree
        {
            return Err(Error::ArityMismatch(format!(
                "cannot add {} and {}",
                self.name, other.name
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let f = self.clone();
        let g = other.clone();
        Ok(GradedMap {
            name: format!("({}+{})", f.name, g.name),
            arity_in: f.arity_in,
            arity_out: f.arity_out,
            degree: f.degree,
            modulus: f.modulus,
            rule: Arc::new(move |w: &TensorWord| {
                let mut out = f.apply(w);
                out.add_assign(&g.apply(w)).expect("matching shapes");
                out
            }),
            cache: None,
        })
    }

    /// n-fold tensor power of the map.
    pub fn tensor_power(&self, n: usize) -> Result<GradedMap> {
        assert!(n >= 1);
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }
}

/// Interleaves a word of even length 2n, read as (a_1..a_n | b_1..b_n), into
/// a_1 b_1 | a_2 b_2 | ... | a_n b_n with the Koszul sign of the shuffle.
pub fn interleave_word(word: &TensorWord) -> Result<(TensorWord, i64)> {
    if word.len() % 2 != 0 {
        return Err(Error::OddTensorLength(word.len()));
    }
    let n = word.len() / 2;
    let mut perm = Vec::with_capacity(2 * n);
    for t in 0..n {
        perm.push(t);
        perm.push(n + t);
    }
    let degrees: Vec<i64> = word.0.iter().map(|b| b.degree).collect();
    let sign = koszul_sign(&degrees, &perm);
    let out = TensorWord(perm.iter().map(|&old| word.0[old]).collect());
    Ok((out, sign))
}

/// The half-shuffle (A^(x n))^(x 2) -> (A^(x 2))^(x n) on a combination.
pub fn sigma_n2(x: &Element) -> Result<Element> {
    if x.tensor_len() % 2 != 0 {
        return Err(Error::OddTensorLength(x.tensor_len()));
    }
    let mut out = Element::zero_raw(x.modulus(), x.tensor_len());
    for (w, c) in x.terms() {
        let (ow, sign) = interleave_word(w)?;
        out.add_term(&ow, sign * c as i64);
    }
    Ok(out)
}

/// The interleaving as a degree-0 GradedMap on words of length 2n.
pub fn sigma_n2_map(p: Prime, n: usize) -> GradedMap {
    GradedMap::from_rule("sigma", 2 * n, 2 * n, 0, p, move |w| {
        let (ow, sign) = interleave_word(w).expect("even length enforced by arity");
        let mut out = Element::zero(p, w.len());
        out.add_term(&ow, sign);
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn b(v: u8, j: u32, deg: i64) -> BasisElt {
        BasisElt { v_exp: v, gamma_idx: j, degree: deg }
    }

    #[test]
    fn element_prunes_zeros_and_orders_terms() {
        let w1 = TensorWord(vec![b(0, 1, 8)]);
        let w2 = TensorWord(vec![b(1, 0, 3)]);
        let mut e = Element::zero(p3(), 1);
        e.add_term(&w1, 2);
        e.add_term(&w2, 1);
        e.add_term(&w1, 1); // 2 + 1 = 0 mod 3, prune
        assert_eq!(e.term_count(), 1);
        assert_eq!(e.coeff(&w2), 1);
        let j = e.to_json();
        assert_eq!(j["k"], 1);
        assert_eq!(j["terms"][0]["word"][0][0], 1);
    }

    #[test]
    fn koszul_sign_examples() {
        // Swap of two even factors.
        assert_eq!(koszul_sign(&[2, 4], &[1, 0]), 1);
        // Swap of two odd factors.
        assert_eq!(koszul_sign(&[3, 5], &[1, 0]), -1);
        // Interleave sign on degrees (a1,a2,a3,b1,b2,b3).
        let perm = [0, 3, 1, 4, 2, 5];
        let deg = [3, 3, 3, 3, 3, 3]; // all odd: exponent b1a2 + b1a3 + b2a3 = 3 odd
        assert_eq!(koszul_sign(&deg, &perm), -1);
        let deg_even_b = [3, 3, 3, 2, 2, 2];
        assert_eq!(koszul_sign(&deg_even_b, &perm), 1);
    }

    #[test]
    fn interleave_matches_displayed_sign() {
        // a_i odd, b_1 odd, b_2 even, b_3 odd: sign = |b1||a2| + |b1||a3| + |b2||a3| = 1+1+0.
        let w = TensorWord(vec![
            b(1, 0, 3),
            b(1, 0, 3),
            b(1, 0, 3),
            b(1, 1, 11),
            b(0, 1, 8),
            b(1, 0, 3),
        ]);
        let (ow, sign) = interleave_word(&w).unwrap();
        assert_eq!(sign, 1); // exponent 2, even
        assert_eq!(ow.0[1], b(1, 1, 11));
        assert_eq!(ow.0[2], b(1, 0, 3));
        // n = 1 is the identity with sign +1.
        let w1 = TensorWord(vec![b(1, 0, 3), b(0, 2, 16)]);
        let (ow1, s1) = interleave_word(&w1).unwrap();
        assert_eq!((ow1, s1), (w1, 1));
        assert!(interleave_word(&TensorWord(vec![b(0, 0, 0)])).is_err());
    }

    #[test]
    fn extend_applies_sign_past_odd_factors() {
        // f of odd degree 1 sliding past one odd factor flips the sign.
        let p = p3();
        let f = GradedMap::from_rule("shift", 1, 1, 1, p, move |w| {
            let x = w.0[0];
            Element::from_term(p, TensorWord(vec![b(x.v_exp, x.gamma_idx, x.degree + 1)]), 1)
        });
        let fx = f.extend(1, 0);
        let w = TensorWord(vec![b(1, 0, 3), b(0, 1, 8)]);
        let out = fx.apply(&w);
        let expect = TensorWord(vec![b(1, 0, 3), b(0, 1, 9)]);
        assert_eq!(out.coeff(&expect), 2); // -1 mod 3
        // Past an even factor: no sign.
        let w2 = TensorWord(vec![b(0, 1, 8), b(1, 0, 3)]);
        let out2 = fx.apply(&w2);
        assert_eq!(out2.coeff(&TensorWord(vec![b(0, 1, 8), b(1, 0, 4)])), 1);
    }

    #[test]
    fn compose_chains_and_checks_arity() {
        let p = p3();
        let id = GradedMap::identity(p, 1);
        // Degree-0 (1 -> 2)-map: prepend the unit factor.
        let pad = GradedMap::from_rule("pad", 1, 2, 0, p, move |w| {
            Element::from_term(p, TensorWord(vec![b(0, 0, 0), w.0[0]]), 1)
        });
        let c = pad.compose(&id).unwrap();
        let w = TensorWord(vec![b(0, 1, 8)]);
        let out = c.apply(&w);
        assert_eq!(out.term_count(), 1);
        assert_eq!(out.coeff(&TensorWord(vec![b(0, 0, 0), b(0, 1, 8)])), 1);
        assert!(id.compose(&pad).is_err()); // 2 -> 1 mismatch
    }

    proptest! {
        #[test]
        fn koszul_sign_multiplicative(
            degs in prop::collection::vec(0i64..6, 2..6),
            seed in any::<u64>(),
        ) {
            use rand::prelude::*;
            let n = degs.len();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut q: Vec<usize> = (0..n).collect();
            let mut r: Vec<usize> = (0..n).collect();
            q.shuffle(&mut rng);
            r.shuffle(&mut rng);
            // Apply q first, then r on the result: combined[new] = q[r[new]].
            let combined: Vec<usize> = (0..n).map(|t| q[r[t]]).collect();
            let after_q: Vec<i64> = (0..n).map(|t| degs[q[t]]).collect();
            let lhs = koszul_sign(&degs, &combined);
            let rhs = koszul_sign(&degs, &q) * koszul_sign(&after_q, &r);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sigma_round_trip_is_identity(
            pairs in prop::collection::vec((0u8..2, 0u32..4), 1..5),
        ) {
            // Interleave then un-interleave via the inverse permutation: total sign +1.
            let n = pairs.len();
            let word = TensorWord(
                pairs
                    .iter()
                    .flat_map(|&(v, j)| {
                        [b(v, j, v as i64 * 3 + j as i64 * 8), b(1 - v, j, (1 - v) as i64 * 3 + j as i64 * 8)]
                    })
                    .collect(),
            );
            let half: Vec<BasisElt> = word.0.clone();
            prop_assert_eq!(half.len(), 2 * n);
            let (ow, s1) = interleave_word(&word).unwrap();
            // Build the inverse rearrangement and check sign multiplicativity to +1.
            let mut inv = vec![0usize; 2 * n];
            for t in 0..n {
                inv[t] = 2 * t;
                inv[n + t] = 2 * t + 1;
            }
            let degs: Vec<i64> = ow.0.iter().map(|x| x.degree).collect();
            let s2 = koszul_sign(&degs, &inv);
            let back = TensorWord(inv.iter().map(|&old| ow.0[old]).collect());
            prop_assert_eq!(back, word);
            prop_assert_eq!(s1 * s2, 1);
        }
    }
}
