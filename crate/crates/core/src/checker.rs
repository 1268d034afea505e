//! Verification engines: the quadratic structure relations of an A-infinity
//! coalgebra, the (f,g)-derivation property of the higher coproduct, the
//! compatibility of the higher coproduct with the product, a combinatorial
//! binomial lemma with its expansion identity, and the certification bundle
//! that ties them together. Every check is exact; failures carry witnesses.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cobar::{cobar_dd, unshift_component, CobarChain, PsiFamily};
use crate::error::{Error, Result};
use crate::field::{binom_nat, BinomTable, Prime};
use crate::hopf::HopfAinfStructure;
use crate::tensor::{interleave_word, sigma_n2_map, BasisElt, Element, GradedMap, TensorWord};

/// One failing input of a relation sweep.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub kind: String,
    pub input: Value,
    pub residual: Value,
}

/// Outcome of sweeping one relation over a truncated basis.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub relation_id: String,
    pub inputs_checked: u64,
    pub max_residual_terms: usize,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

impl RelationReport {
    fn from_results(relation_id: String, results: Vec<(TensorWord, Vec<Witness>)>) -> RelationReport {
        let inputs_checked = results.len() as u64;
        let mut witnesses = Vec::new();
        let mut max_residual_terms = 0;
        for (_, ws) in results {
            for w in ws {
                if let Some(terms) = w.residual.get("terms").and_then(|t| t.as_array()) {
                    max_residual_terms = max_residual_terms.max(terms.len());
                }
                witnesses.push(w);
            }
        }
        let pass = witnesses.is_empty();
        RelationReport { relation_id, inputs_checked, max_residual_terms, pass, witnesses }
    }
}

fn residual_witness(input: &TensorWord, residual: &Element) -> Vec<Witness> {
    if residual.is_zero() {
        Vec::new()
    } else {
        vec![Witness {
            kind: "residual".into(),
            input: input.to_json(),
            residual: residual.to_json(),
        }]
    }
}

/// Runs `check` over `inputs` in parallel, merging witnesses in input order.
fn sweep<F>(relation_id: impl Into<String>, inputs: Vec<TensorWord>, check: F) -> RelationReport
where
    F: Fn(&TensorWord) -> Vec<Witness> + Sync,
{
    let results: Vec<(TensorWord, Vec<Witness>)> = inputs
        .into_par_iter()
        .map(|w| {
            let ws = check(&w);
            (w, ws)
        })
        .collect();
    RelationReport::from_results(relation_id.into(), results)
}

/// All length-1 basis inputs with gamma index <= max_j.
fn basis_words(s: &HopfAinfStructure, max_j: u32) -> Vec<TensorWord> {
    s.params.basis_up_to(max_j).into_iter().map(|b| TensorWord(vec![b])).collect()
}

/// All basis pairs with gamma indices summing to <= max_j.
fn basis_pairs(s: &HopfAinfStructure, max_j: u32) -> Vec<TensorWord> {
    let mut out = Vec::new();
    for vx in 0..=1u8 {
        for vy in 0..=1u8 {
            for jx in 0..=max_j {
                for jy in 0..=(max_j - jx) {
                    out.push(TensorWord(vec![s.params.basis(vx, jx), s.params.basis(vy, jy)]));
                }
            }
        }
    }
    out
}

/// The signed composites of the degree-n structure relation:
/// sum over 0 <= j <= n-1, 0 <= i <= n-j-1 of
/// (-1)^(j(n+i+1)) 1^i (x) psi^(j+1) (x) 1^(n-i-j-1) after psi^(n-j).
/// Composites with a vanishing operator on either side are dropped.
pub fn ainf_composites(s: &HopfAinfStructure, n: usize) -> Vec<(i64, GradedMap)> {
    let mut out = Vec::new();
    for j in 0..n {
        let Some(outer) = s.psi(j + 1) else { continue };
        let Some(inner) = s.psi(n - j) else { continue };
        for i in 0..=(n - j - 1) {
            let padded = outer.extend(i, n - i - j - 1);
            let composite = padded.compose(inner).expect("arities chain by construction");
            let sign = if (j * (n + i + 1)) % 2 == 0 { 1 } else { -1 };
            out.push((sign, composite));
        }
    }
    out
}

/// The relation evaluated on one basis element.
pub fn ainf_residual(composites: &[(i64, GradedMap)], n: usize, x: &TensorWord, modulus: u64) -> Element {
    let mut acc = Element::zero_raw(modulus, n);
    for (sign, map) in composites {
        let term = map.apply(x);
        acc.add_assign(&term.scale(*sign)).expect("uniform shapes");
    }
    acc
}

/// Sweeps the degree-n structure relation over the truncated basis.
pub fn ainf_relation(s: &HopfAinfStructure, n: usize, max_j: u32) -> RelationReport {
    let composites = ainf_composites(s, n);
    let modulus = s.prime().get();
    sweep(format!("ainf_n{n}"), basis_words(s, max_j), move |w| {
        let res = ainf_residual(&composites, n, w, modulus);
        residual_witness(w, &res)
    })
}

/// mu associativity on basis triples with gamma indices summing to <= max_j.
pub fn mu_assoc_check(s: &HopfAinfStructure, max_j: u32) -> RelationReport {
    let left = s.mu.compose(&s.mu.extend(0, 1)).expect("arity");
    let right = s.mu.compose(&s.mu.extend(1, 0)).expect("arity");
    let mut inputs = Vec::new();
    for va in 0..=1u8 {
        for vb in 0..=1u8 {
            for vc in 0..=1u8 {
                for ja in 0..=max_j {
                    for jb in 0..=(max_j - ja) {
                        for jc in 0..=(max_j - ja - jb) {
                            inputs.push(TensorWord(vec![
                                s.params.basis(va, ja),
                                s.params.basis(vb, jb),
                                s.params.basis(vc, jc),
                            ]));
                        }
                    }
                }
            }
        }
    }
    sweep("mu_assoc", inputs, move |w| {
        let res = left.apply(w).sub(&right.apply(w)).expect("uniform shapes");
        residual_witness(w, &res)
    })
}

/// Two-sided counit: projecting either coproduct leg onto the unit
/// coefficient recovers the input.
pub fn counit_check(s: &HopfAinfStructure, max_j: u32) -> RelationReport {
    let delta2 = s.delta2.clone();
    let modulus = s.prime().get();
    sweep("counit", basis_words(s, max_j), move |w| {
        let d = delta2.apply(w);
        let mut left = Element::zero_raw(modulus, 1);
        let mut right = Element::zero_raw(modulus, 1);
        for (t, c) in d.terms() {
            if t.0[0].is_unit() {
                left.add_term(&TensorWord(vec![t.0[1]]), c as i64);
            }
            if t.0[1].is_unit() {
                right.add_term(&TensorWord(vec![t.0[0]]), c as i64);
            }
        }
        let mut id = Element::zero_raw(modulus, 1);
        id.add_term(w, 1);
        let res_l = left.sub(&id).expect("shape");
        let res_r = right.sub(&id).expect("shape");
        let mut ws = Vec::new();
        if !res_l.is_zero() {
            ws.push(Witness { kind: "counit_left".into(), input: w.to_json(), residual: res_l.to_json() });
        }
        if !res_r.is_zero() {
            ws.push(Witness { kind: "counit_right".into(), input: w.to_json(), residual: res_r.to_json() });
        }
        ws
    })
}

/// The coproduct is an algebra map:
/// delta2 mu = (mu (x) mu) sigma (delta2 (x) delta2) on basis pairs.
pub fn algebra_map_check(s: &HopfAinfStructure, max_j: u32) -> RelationReport {
    let p = s.prime();
    let lhs = s.delta2.compose(&s.mu).expect("arity");
    let dd = s.delta2.tensor(&s.delta2).expect("modulus");
    let mumu = s.mu.tensor(&s.mu).expect("modulus");
    let rhs = mumu
        .compose(&sigma_n2_map(p, 2))
        .and_then(|m| m.compose(&dd))
        .expect("arity");
    sweep("delta2_algebra_map", basis_pairs(s, max_j), move |w| {
        let res = lhs.apply(w).sub(&rhs.apply(w)).expect("uniform shapes");
        residual_witness(w, &res)
    })
}

/// Left- and right-leaning iterated coproducts agree (coassociativity).
pub fn f_eq_g_check(s: &HopfAinfStructure, max_j: u32) -> RelationReport {
    let p = s.prime().get() as usize;
    let mut pairs = Vec::new();
    for n in 3..=p.max(3) {
        pairs.push((n, s.f_n(n).expect("n >= 2"), s.g_n(n).expect("n >= 2")));
    }
    let inputs = basis_words(s, max_j);
    let results: Vec<(TensorWord, Vec<Witness>)> = inputs
        .into_par_iter()
        .map(|w| {
            let mut ws = Vec::new();
            for (n, f, g) in &pairs {
                let res = f.apply(&w).sub(&g.apply(&w)).expect("uniform shapes");
                if !res.is_zero() {
                    ws.push(Witness {
                        kind: format!("f{n}_vs_g{n}"),
                        input: w.to_json(),
                        residual: res.to_json(),
                    });
                }
            }
            (w, ws)
        })
        .collect();
    RelationReport::from_results("f_eq_g".into(), results)
}

/// h mu = mu^(x n) sigma (f (x) h + h (x) g) on basis pairs: h is an
/// (f,g)-derivation for the convolution product.
pub fn fg_derivation_check(
    id: impl Into<String>,
    s: &HopfAinfStructure,
    h: &GradedMap,
    f: &GradedMap,
    g: &GradedMap,
    max_j: u32,
) -> Result<RelationReport> {
    let n = h.arity_out;
    if f.arity_in != 1 || g.arity_in != 1 || h.arity_in != 1 || f.arity_out != n || g.arity_out != n {
        return Err(Error::ArityMismatch(format!(
            "derivation check needs 1->{n} maps, got f: {}->{}, g: {}->{}, h: {}->{}",
            f.arity_in, f.arity_out, g.arity_in, g.arity_out, h.arity_in, h.arity_out
        )));
    }
    let p = s.prime();
    let lhs = h.compose(&s.mu)?;
    let fh = f.tensor(h)?;
    let hg = h.tensor(g)?;
    let mu_n = s.mu.tensor_power(n)?;
    let rhs = mu_n.compose(&sigma_n2_map(p, n))?.compose(&fh.plus(&hg)?)?;
    Ok(sweep(id.into(), basis_pairs(s, max_j), move |w| {
        let res = lhs.apply(w).sub(&rhs.apply(w)).expect("uniform shapes");
        residual_witness(w, &res)
    }))
}

/// The compatibility of the higher coproduct with the product at n = p, with
/// three side conditions checked per input:
///  - on inputs involving v, each side vanishes separately;
///  - on gamma_i (x) gamma_j, every left-side coefficient on an output word
///    v g_(z_1) | ... | v g_(z_p) equals C(z_1+...+z_p+1, i);
///  - the interleaving permutation contributes no signs on gamma inputs.
pub fn hopf_compat(s: &HopfAinfStructure, max_j: u32) -> Result<RelationReport> {
    let p = s.prime();
    let n = p.get() as usize;
    let f = s.f_n(n)?;
    let h = s.delta_p.clone();
    let lhs = h.compose(&s.mu)?;
    let fh = f.tensor(&h)?;
    let hf = h.tensor(&f)?;
    let mu_n = s.mu.tensor_power(n)?;
    let rhs = mu_n.compose(&sigma_n2_map(p, n))?.compose(&fh.plus(&hf)?)?;
    let binom = s.binom_arc();
    Ok(sweep(format!("hopf_compat_n{n}"), basis_pairs(s, max_j), move |w| {
        let (x, y) = (w.0[0], w.0[1]);
        let l = lhs.apply(w);
        let r = rhs.apply(w);
        let mut ws = residual_witness(w, &l.sub(&r).expect("uniform shapes"));
        if x.v_exp + y.v_exp > 0 {
            // Both sides must vanish outright on inputs involving v.
            for (side, val) in [("lhs", &l), ("rhs", &r)] {
                if !val.is_zero() {
                    ws.push(Witness {
                        kind: format!("{side}_nonzero_on_v_input"),
                        input: w.to_json(),
                        residual: val.to_json(),
                    });
                }
            }
        } else {
            // Closed form of the left side on gamma (x) gamma inputs.
            for (t, c) in l.terms() {
                let z_sum: u64 = t.0.iter().map(|b| b.gamma_idx as u64).sum();
                let expect = binom.get(z_sum + 1, x.gamma_idx as u64);
                if c != expect {
                    ws.push(Witness {
                        kind: "coefficient_closed_form".into(),
                        input: w.to_json(),
                        residual: json!({"word": t.to_json(), "coeff": c, "expected": expect}),
                    });
                }
            }
            // No interleave signs arise: one side of each summand is even.
            for half in [&fh, &hf] {
                for (t, _) in half.apply(w).terms() {
                    let (_, sign) = interleave_word(t).expect("even length");
                    if sign != 1 {
                        ws.push(Witness {
                            kind: "interleave_sign".into(),
                            input: w.to_json(),
                            residual: json!({"word": t.to_json(), "sign": sign}),
                        });
                    }
                }
            }
        }
        ws
    }))
}

/// Ring selector for the binomial lemma.
#[derive(Clone, Copy, Debug)]
pub enum LemmaRing {
    Nat,
    Mod(Prime),
}

/// Both sides of the lemma, evaluated exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub lhs: u128,
    pub rhs: u128,
    pub equal: bool,
}

fn for_each_weak_composition(total: u64, parts: usize, f: &mut impl FnMut(&[u64])) {
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut cur = vec![0u64; parts];
    fn rec(cur: &mut Vec<u64>, idx: usize, left: u64, f: &mut impl FnMut(&[u64])) {
        if idx + 1 == cur.len() {
            cur[idx] = left;
            f(cur);
            return;
        }
        for take in 0..=left {
            cur[idx] = take;
            rec(cur, idx + 1, left - take, f);
        }
    }
    rec(&mut cur, 0, total, f);
}

/// C(z_1+...+z_n+1, i) against the two-sum expansion
/// sum over s_1+...+s_n = i-1 of prod C(z_t, s_t)
/// plus sum over t_1+...+t_n = i of prod C(z_t, t_t),
/// over the naturals or mod p.
pub fn lemma_comb(z: &[u64], i: u64, ring: LemmaRing) -> LemmaOutcome {
    match ring {
        LemmaRing::Nat => {
            let total: u64 = z.iter().sum();
            let lhs = binom_nat(total + 1, i).expect("desk-scale binomial");
            let mut rhs: u128 = 0;
            for target in [i.checked_sub(1), Some(i)].into_iter().flatten() {
                for_each_weak_composition(target, z.len(), &mut |comp| {
                    let mut prod: u128 = 1;
                    for (t, &select) in comp.iter().enumerate() {
                        prod *= binom_nat(z[t], select).expect("desk-scale binomial");
                        if prod == 0 {
                            break;
                        }
                    }
                    rhs += prod;
                });
            }
            LemmaOutcome { lhs, rhs, equal: lhs == rhs }
        }
        LemmaRing::Mod(p) => {
            let max = z.iter().copied().max().unwrap_or(0).max(z.iter().sum::<u64>() + 1).max(i);
            let table = BinomTable::new(p, max as usize);
            lemma_comb_mod(z, i, &table)
        }
    }
}

/// Mod-p lemma evaluation against a prebuilt table (for big sweeps).
pub fn lemma_comb_mod(z: &[u64], i: u64, table: &BinomTable) -> LemmaOutcome {
    let m = table.modulus();
    let total: u64 = z.iter().sum();
    let lhs = table.get(total + 1, i);
    let mut rhs: u64 = 0;
    for target in [i.checked_sub(1), Some(i)].into_iter().flatten() {
        for_each_weak_composition(target, z.len(), &mut |comp| {
            let mut prod: u64 = 1;
            for (t, &select) in comp.iter().enumerate() {
                prod = (prod * table.get(z[t], select)) % m;
                if prod == 0 {
                    break;
                }
            }
            rhs = (rhs + prod) % m;
        });
    }
    LemmaOutcome { lhs: lhs as u128, rhs: rhs as u128, equal: lhs == rhs }
}

/// The re-indexed expansion inside the lemma's proof:
/// C(z_1+...+z_n, i) = sum over t_1+...+t_n = i of prod C(z_t, t_t) mod p.
pub fn vandermonde_expansion_check(z: &[u64], i: u64, p: Prime) -> bool {
    let max = z.iter().copied().max().unwrap_or(0).max(z.iter().sum::<u64>()).max(i);
    let table = BinomTable::new(p, max as usize);
    let m = table.modulus();
    let lhs = table.get(z.iter().sum(), i);
    let mut rhs: u64 = 0;
    for_each_weak_composition(i, z.len(), &mut |comp| {
        let mut prod: u64 = 1;
        for (t, &select) in comp.iter().enumerate() {
            prod = (prod * table.get(z[t], select)) % m;
            if prod == 0 {
                break;
            }
        }
        rhs = (rhs + prod) % m;
    });
    lhs == rhs
}

/// One random-tuple failure.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaFailure {
    pub z: Vec<u64>,
    pub i: u64,
    pub lhs: u128,
    pub rhs: u128,
}

/// Seeded random sweep of the lemma mod p with n = p parts.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaSweepReport {
    pub p: u64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub passes: u64,
    pub pass: bool,
    pub failures: Vec<LemmaFailure>,
}

/// Tuple entries are drawn in 0..=24 and i in 0..=12: wide enough to cross
/// the carry behavior of base-p digits for p <= 7, small enough to enumerate.
pub fn lemma_random_sweep(p: Prime, trials: u64, seed: u64) -> LemmaSweepReport {
    use rand::Rng;
    use rand::SeedableRng;
    let n = p.get() as usize;
    // Top row needed is z_1 + ... + z_n + 1 <= 24 n + 1.
    let table = BinomTable::new(p, 24 * n + 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(Vec<u64>, u64)> = (0..trials)
        .map(|_| {
            let z: Vec<u64> = (0..n).map(|_| rng.random_range(0..=24u64)).collect();
            let i = rng.random_range(0..=12u64);
            (z, i)
        })
        .collect();
    let outcomes: Vec<(Vec<u64>, u64, LemmaOutcome)> = cases
        .into_par_iter()
        .map(|(z, i)| {
            let o = lemma_comb_mod(&z, i, &table);
            (z, i, o)
        })
        .collect();
    let mut passes = 0;
    let mut failures = Vec::new();
    for (z, i, o) in outcomes {
        if o.equal {
            passes += 1;
        } else {
            failures.push(LemmaFailure { z, i, lhs: o.lhs, rhs: o.rhs });
        }
    }
    LemmaSweepReport {
        p: p.get(),
        n,
        trials,
        seed,
        passes,
        pass: failures.is_empty(),
        failures,
    }
}

/// The whole certification battery for one structure.
#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub p: u64,
    pub m: u64,
    pub max_j: u32,
    pub pass: bool,
    pub checks: Vec<RelationReport>,
}

/// Product/coproduct axioms, the structure relations at every arity where
/// they are not vacuous, and the product compatibility of the higher
/// coproduct.
pub fn certify_hopf_ainf(s: &HopfAinfStructure, max_j: u32) -> Result<CertifyReport> {
    let p = s.prime().get() as usize;
    let mut checks = vec![
        mu_assoc_check(s, max_j),
        ainf_relation(s, 3, max_j),
        counit_check(s, max_j),
        algebra_map_check(s, max_j),
        f_eq_g_check(s, max_j.min(8)),
        ainf_relation(s, p + 1, max_j),
        ainf_relation(s, 2 * p - 1, max_j),
    ];
    checks.push(hopf_compat(s, max_j)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(CertifyReport {
        p: s.prime().get(),
        m: s.params.m,
        max_j,
        pass,
        checks,
    })
}

/// The arities at which the structure relation is not vacuous for the family
/// {delta2, delta_p}: 3, p+1, and 2p-1.
pub fn nonvacuous_arities(p: Prime) -> Vec<usize> {
    let p = p.get() as usize;
    let mut ns = vec![3, p + 1, 2 * p - 1];
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// The higher-coproduct family of a structure, for the cobar oracle.
pub fn psi_family(s: &HopfAinfStructure) -> PsiFamily {
    let p = s.prime().get() as usize;
    PsiFamily::new(vec![(2, s.delta2.clone()), (p, s.delta_p.clone())]).expect("shapes fixed")
}

/// A disagreement between the cobar oracle and the direct checker.
#[derive(Clone, Debug)]
pub struct CobarMismatch {
    pub n: usize,
    pub from_cobar: Element,
    pub direct: Element,
}

/// Translates d(d(x)) for a length-1 word through the shift dictionary and
/// compares it component by component with the direct relation residuals.
pub fn cobar_vs_direct(s: &HopfAinfStructure, x: BasisElt) -> std::result::Result<(), CobarMismatch> {
    let fam = psi_family(s);
    let word = TensorWord(vec![x]);
    let dd = cobar_dd(&fam, &word);
    let p = s.prime().get() as usize;
    let max_n = 1 + 2 * (p - 1);
    let modulus = s.prime().get();
    for n in 1..=max_n {
        let from_cobar = unshift_component(&dd, n);
        let composites = ainf_composites(s, n);
        let direct = ainf_residual(&composites, n, &word, modulus);
        if from_cobar != direct {
            return Err(CobarMismatch { n, from_cobar, direct });
        }
    }
    Ok(())
}

/// d(d(x|y)) splits as d(d(x))|y + x|d(d(y)): the cross terms cancel
/// identically, whatever the coproduct family. Verifying the split reduces
/// length-2 agreement to the length-1 dictionary.
pub fn cobar_leibniz_split(s: &HopfAinfStructure, x: BasisElt, y: BasisElt) -> bool {
    let fam = psi_family(s);
    let modulus = s.prime().get();
    let dd_xy = cobar_dd(&fam, &TensorWord(vec![x, y]));
    let dd_x = cobar_dd(&fam, &TensorWord(vec![x]));
    let dd_y = cobar_dd(&fam, &TensorWord(vec![y]));
    let mut expect = CobarChain::zero(modulus);
    for (w, c) in dd_x.terms() {
        let mut appended = w.0.clone();
        appended.push(y);
        expect.add_term(&TensorWord(appended), c as i64);
    }
    for (w, c) in dd_y.terms() {
        let mut prepended = vec![x];
        prepended.extend_from_slice(&w.0);
        expect.add_term(&TensorWord(prepended), c as i64);
    }
    dd_xy == expect
}
