//! Finite fields `F_{p^k}`, Laurent polynomials over them, and trace-value counting on tori.
//!
//! Elements are dense little-endian coefficient vectors modulo a fixed monic
//! irreducible polynomial. The modulus for `(p, k)` is the first irreducible
//! one when monic polynomials are ordered by the integer `Σ c_i p^i`, so the
//! representation is reproducible everywhere.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{is_prime, prime_factors};

/// Evaluation budget applied when callers do not pass one.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Largest field for which a full discrete-trace table is built.
const TABLE_LIMIT: u64 = 1 << 22;

const MAX_ORDER: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    coeffs: Vec<u64>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    order: u64,
    basis_trace: Vec<u64>,
    generator: OnceLock<FFElem>,
}

impl Clone for FieldCtx {
    fn clone(&self) -> Self {
        FieldCtx {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
            order: self.order,
            basis_trace: self.basis_trace.clone(),
            generator: self.generator.clone(),
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// The field `F_{p^k}` with its canonical modulus.
pub fn make_field(p: u64, k: usize) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    let order = checked_pow(p, k).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
        Error::Unsupported(format!("field of order {p}^{k} exceeds 2^40"))
    })?;
    let tail_count = order;
    for r in 0..tail_count {
        let mut modulus = digits(r, p, k);
        modulus.push(1);
        if upoly::is_irreducible(&modulus, p) {
            return Ok(FieldCtx::with_modulus(p, modulus));
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Field with an explicit monic modulus, which must be irreducible.
    pub fn from_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus must be monic with residues below p".into()));
        }
        if !upoly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidInput(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        let k = modulus.len() - 1;
        checked_pow(p, k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Unsupported(format!("field of order {p}^{k} exceeds 2^40")))?;
        Ok(Self::with_modulus(p, modulus))
    }

    fn with_modulus(p: u64, modulus: Vec<u64>) -> Self {
        let k = modulus.len() - 1;
        let mut ctx = FieldCtx {
            p,
            k,
            modulus,
            order: checked_pow(p, k).unwrap(),
            basis_trace: Vec::new(),
            generator: OnceLock::new(),
        };
        ctx.basis_trace = (0..k)
            .map(|i| {
                let mut c = vec![0; k];
                c[i] = 1;
                ctx.trace_by_frobenius(&FFElem { coeffs: c })
            })
            .collect();
        ctx
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Little-endian coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FFElem {
        FFElem { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FFElem {
        self.from_base(1)
    }

    pub fn from_base(&self, c: u64) -> FFElem {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c % self.p;
        FFElem { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FFElem {
        let mut c: Vec<u64> = coeffs.iter().map(|x| x % self.p).collect();
        c.resize(self.k.max(c.len()), 0);
        let r = upoly::rem(&c, &self.modulus, self.p);
        let mut out = vec![0; self.k];
        out[..r.len()].copy_from_slice(&r);
        FFElem { coeffs: out }
    }

    /// The element `Σ c_i y^i` with `index = Σ c_i p^i`.
    pub fn from_index(&self, index: u64) -> FFElem {
        debug_assert!(index < self.order);
        FFElem { coeffs: digits(index, self.p, self.k) }
    }

    pub fn index(&self, x: &FFElem) -> u64 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// The class of `y`, the generator of the polynomial basis.
    pub fn basis_root(&self) -> FFElem {
        if self.k == 1 {
            // F_p[y]/(y - c): y is the residue c.
            return self.from_base((self.p - self.modulus[0]) % self.p);
        }
        let mut c = vec![0; self.k];
        c[1] = 1;
        FFElem { coeffs: c }
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect() }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + self.p - y) % self.p).collect(),
        }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        FFElem { coeffs: a.coeffs.iter().map(|x| (self.p - x) % self.p).collect() }
    }

    pub fn scale(&self, a: &FFElem, c: u64) -> FFElem {
        let c = c % self.p;
        FFElem { coeffs: a.coeffs.iter().map(|x| x * c % self.p).collect() }
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let k = self.k;
        let p = self.p;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // Reduce with the monic modulus from the top down.
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + j;
                prod[idx] = (prod[idx] + (p - m) * c) % p;
            }
        }
        prod.truncate(k);
        FFElem { coeffs: prod }
    }

    pub fn pow(&self, a: &FFElem, mut e: u64) -> FFElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a signed exponent; `None` for a negative power of zero.
    pub fn pow_signed(&self, a: &FFElem, e: i64) -> Option<FFElem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            Some(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }

    pub fn frobenius(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.p)
    }

    fn trace_by_frobenius(&self, a: &FFElem) -> u64 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left F_p");
        acc.coeffs[0]
    }

    /// Absolute trace to `F_p`, through the precomputed traces of the basis.
    pub fn trace(&self, a: &FFElem) -> u64 {
        a.coeffs.iter().zip(&self.basis_trace).fold(0, |acc, (c, t)| (acc + c * t) % self.p)
    }

    /// Smallest-index element of multiplicative order `q - 1`.
    pub fn generator(&self) -> &FFElem {
        self.generator.get_or_init(|| {
            let n = self.order - 1;
            let factors = prime_factors(n);
            (1..self.order)
                .map(|i| self.from_index(i))
                .find(|g| factors.iter().all(|r| self.pow(g, n / r) != self.one()))
                .expect("multiplicative group is cyclic")
        })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        FFElem { coeffs: (0..self.k).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        self.from_index(rng.gen_range(1..self.order))
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }
}

/// `F_q ⊂ F_{q^k}`, with `q = p^a`, realised by a root of the base modulus.
#[derive(Clone, Debug)]
pub struct FieldTower {
    pub base: FieldCtx,
    pub ext: FieldCtx,
    root: FFElem,
}

impl FieldTower {
    pub fn new(base: FieldCtx, k: usize) -> Result<Self> {
        let ext = make_field(base.p, base.k * k)?;
        let root = if base.k == 1 {
            ext.from_base(base.index(&base.basis_root()))
        } else {
            // Roots of the base modulus lie in the subfield of order q; search it.
            let q = base.order;
            let step = (ext.order - 1) / (q - 1);
            let h = ext.pow(ext.generator(), step);
            let mut x = ext.one();
            let mut found = None;
            for _ in 0..(q - 1) {
                if upoly_eval_ext(&ext, &base.modulus, &x).is_zero() {
                    found = Some(x.clone());
                    break;
                }
                x = ext.mul(&x, &h);
            }
            found.expect("the base modulus splits over the extension")
        };
        Ok(FieldTower { base, ext, root })
    }

    pub fn embed(&self, c: &FFElem) -> FFElem {
        let mut acc = self.ext.zero();
        let mut power = self.ext.one();
        for &ci in &c.coeffs {
            if ci != 0 {
                acc = self.ext.add(&acc, &self.ext.scale(&power, ci));
            }
            power = self.ext.mul(&power, &self.root);
        }
        acc
    }
}

fn upoly_eval_ext(ext: &FieldCtx, poly: &[u64], x: &FFElem) -> FFElem {
    poly.iter().rev().fold(ext.zero(), |acc, &c| ext.add(&ext.mul(&acc, x), &ext.from_base(c)))
}

/// Finite sum `Σ a_v x^v` with exponent vectors in `Z^m` and coefficients in a base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    m: usize,
    terms: BTreeMap<Vec<i64>, FFElem>,
}

impl LaurentPoly {
    pub fn new(m: usize) -> Self {
        LaurentPoly { m, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    /// Adds `c · x^v`, merging with an existing term and dropping zeros.
    pub fn add_term(&mut self, ctx: &FieldCtx, v: Vec<i64>, c: FFElem) {
        assert_eq!(v.len(), self.m, "exponent vector length");
        let sum = match self.terms.remove(&v) {
            Some(old) => ctx.add(&old, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(v, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, FFElem> {
        &self.terms
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms whose exponents satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(&[i64]) -> bool) -> LaurentPoly {
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().filter(|(v, _)| keep(v)).map(|(v, c)| (v.clone(), c.clone())).collect(),
        }
    }

    /// `x_i ∂/∂x_i`.
    pub fn log_derivative(&self, ctx: &FieldCtx, i: usize) -> LaurentPoly {
        let mut out = LaurentPoly::new(self.m);
        for (v, c) in &self.terms {
            let e = v[i].rem_euclid(ctx.p as i64) as u64;
            out.add_term(ctx, v.clone(), ctx.scale(c, e));
        }
        out
    }

    /// `[{"expvec": [...], "coeff": [...]}, ...]`
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms.iter().map(|(v, c)| json!({"expvec": v, "coeff": c.coeffs})).collect(),
        )
    }

    pub fn from_json(ctx: &FieldCtx, m: usize, v: &Value) -> Option<Self> {
        let mut f = LaurentPoly::new(m);
        for t in v.as_array()? {
            let e: Vec<i64> = t.get("expvec")?.as_array()?.iter().map(Value::as_i64).collect::<Option<_>>()?;
            let c: Vec<u64> = t.get("coeff")?.as_array()?.iter().map(Value::as_u64).collect::<Option<_>>()?;
            if e.len() != m {
                return None;
            }
            f.add_term(ctx, e, ctx.from_coeffs(&c));
        }
        Some(f)
    }
}

/// Value of `f` at a point of `(F_{q^k})^m`, coefficients embedded through the tower.
pub fn evaluate(tower: &FieldTower, f: &LaurentPoly, point: &[FFElem]) -> Result<FFElem> {
    if point.len() != f.m {
        return Err(Error::InvalidInput(format!("point has {} coordinates, expected {}", point.len(), f.m)));
    }
    let ext = &tower.ext;
    let mut acc = ext.zero();
    for (v, c) in &f.terms {
        let mut term = tower.embed(c);
        for (i, (&e, x)) in v.iter().zip(point).enumerate() {
            let xe = ext.pow_signed(x, e).ok_or(Error::ZeroCoordinate(i))?;
            term = ext.mul(&term, &xe);
        }
        acc = ext.add(&acc, &term);
    }
    Ok(acc)
}

/// Number of points of `(F^*)^m`, refusing anything above `budget`.
pub fn torus_size(ctx: &FieldCtx, m: usize, budget: u128) -> Result<u128> {
    let base = u128::from(ctx.order - 1);
    let mut total: u128 = 1;
    for _ in 0..m {
        total = total.saturating_mul(base);
    }
    if total > budget {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    Ok(total)
}

/// Enumerates `(F^*)^m` in mixed-radix order; any index range can be taken independently.
#[derive(Clone, Debug)]
pub struct TorusIter<'a> {
    ctx: &'a FieldCtx,
    m: usize,
    next: u128,
    end: u128,
}

pub fn torus_iter(ctx: &FieldCtx, m: usize, budget: u128) -> Result<TorusIter<'_>> {
    let total = torus_size(ctx, m, budget)?;
    Ok(TorusIter { ctx, m, next: 0, end: total })
}

impl<'a> TorusIter<'a> {
    pub fn len_total(&self) -> u128 {
        self.end
    }

    /// The sub-stream of indices `start..end`.
    pub fn range(&self, start: u128, end: u128) -> TorusIter<'a> {
        TorusIter { ctx: self.ctx, m: self.m, next: start, end: end.min(self.end) }
    }

    /// Splits the stream into `parts` contiguous ranges.
    pub fn split(&self, parts: usize) -> Vec<TorusIter<'a>> {
        let parts = parts.max(1) as u128;
        let n = self.end - self.next;
        (0..parts)
            .map(|i| self.range(self.next + n * i / parts, self.next + n * (i + 1) / parts))
            .collect()
    }

    fn point(&self, mut idx: u128) -> Vec<FFElem> {
        let radix = u128::from(self.ctx.order - 1);
        let mut out = vec![self.ctx.zero(); self.m];
        for slot in out.iter_mut().rev() {
            *slot = self.ctx.from_index((idx % radix) as u64 + 1);
            idx /= radix;
        }
        out
    }
}

impl Iterator for TorusIter<'_> {
    type Item = Vec<FFElem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let p = self.point(self.next);
        self.next += 1;
        Some(p)
    }
}

/// `N_c = #{x ∈ (F_{q^k}^*)^m : Tr f(x) = c}` by direct evaluation of every point.
pub fn trace_counts_naive(tower: &FieldTower, f: &LaurentPoly, budget: u128) -> Result<Vec<u64>> {
    let ext = &tower.ext;
    let it = torus_iter(ext, f.m, budget)?;
    let parts = it.split(rayon::current_num_threads() * 4);
    let p = ext.p as usize;
    parts
        .into_par_iter()
        .map(|range| {
            let mut counts = vec![0u64; p];
            for x in range {
                let v = evaluate(tower, f, &x)?;
                counts[ext.trace(&v) as usize] += 1;
            }
            Ok(counts)
        })
        .try_reduce(|| vec![0u64; p], |a, b| Ok(add_counts(a, b)))
}

/// Same counts as [`trace_counts_naive`], through discrete logarithms.
///
/// With `x_i = g^{e_i}` and `a_v = g^{l_v}`, `Tr f(x) = Σ_v Tr(g^{l_v + v·e})`,
/// so each point costs one table lookup per term. Fields beyond the table
/// limit step each term multiplicatively instead.
pub fn trace_counts(tower: &FieldTower, f: &LaurentPoly, budget: u128) -> Result<Vec<u64>> {
    let ext = &tower.ext;
    let m = f.m;
    torus_size(ext, m, budget)?;
    let p = ext.p as usize;
    if f.is_empty() {
        let total = torus_size(ext, m, budget)?;
        let mut counts = vec![0u64; p];
        counts[0] = total as u64;
        return Ok(counts);
    }
    if m == 0 {
        return trace_counts_naive(tower, f, budget);
    }
    let g = ext.generator();
    let n = ext.order - 1;
    let terms: Vec<(Vec<i64>, FFElem)> = f.terms.iter().map(|(v, c)| (v.clone(), tower.embed(c))).collect();
    let outer: u128 = (0..m - 1).fold(1u128, |acc, _| acc * u128::from(n));

    if n < TABLE_LIMIT {
        let (table, logs) = trace_table(ext, &terms);
        let exps: Vec<Vec<u64>> =
            terms.iter().map(|(v, _)| v.iter().map(|&e| e.rem_euclid(n as i64) as u64).collect()).collect();
        let steps: Vec<u64> = exps.iter().map(|v| v[m - 1]).collect();
        let counts = chunk_ranges(outer)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut counts = vec![0u64; p];
                let mut cur = vec![0u64; terms.len()];
                for idx in lo..hi {
                    let prefix = mixed_radix(idx, n, m - 1);
                    for (t, slot) in cur.iter_mut().enumerate() {
                        *slot = prefix
                            .iter()
                            .zip(&exps[t])
                            .fold(logs[t], |s, (&e, &x)| (s + mulmod(e, x, n)) % n);
                    }
                    for _ in 0..n {
                        let mut tr = 0usize;
                        for (slot, &st) in cur.iter_mut().zip(&steps) {
                            tr += table[*slot as usize] as usize;
                            *slot += st;
                            if *slot >= n {
                                *slot -= n;
                            }
                        }
                        counts[tr % p] += 1;
                    }
                }
                counts
            })
            .reduce(|| vec![0u64; p], add_counts);
        return Ok(counts);
    }

    let steps: Vec<FFElem> = terms
        .iter()
        .map(|(v, _)| ext.pow(g, v[m - 1].rem_euclid(n as i64) as u64))
        .collect();
    let counts = chunk_ranges(outer)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = vec![0u64; p];
            for idx in lo..hi {
                let prefix = mixed_radix(idx, n, m - 1);
                let mut cur: Vec<FFElem> = terms
                    .iter()
                    .map(|(v, c)| {
                        let e = prefix.iter().zip(v).fold(0u64, |acc, (&x, &vi)| {
                            (acc + mulmod(x, vi.rem_euclid(n as i64) as u64, n)) % n
                        });
                        ext.mul(c, &ext.pow(g, e))
                    })
                    .collect();
                for _ in 0..n {
                    let mut tr = 0u64;
                    for (slot, st) in cur.iter_mut().zip(&steps) {
                        tr += ext.trace(slot);
                        *slot = ext.mul(slot, st);
                    }
                    counts[(tr % ext.p) as usize] += 1;
                }
            }
            counts
        })
        .reduce(|| vec![0u64; p], add_counts);
    Ok(counts)
}

/// `Tr(g^i)` for every `i < q - 1`, plus the discrete logs of the term coefficients.
fn trace_table(ext: &FieldCtx, terms: &[(Vec<i64>, FFElem)]) -> (Vec<u16>, Vec<u64>) {
    let n = ext.order - 1;
    let mut wanted: HashMap<u64, Vec<usize>> = HashMap::new();
    for (t, (_, c)) in terms.iter().enumerate() {
        wanted.entry(ext.index(c)).or_default().push(t);
    }
    let mut logs = vec![0u64; terms.len()];
    let mut table = vec![0u16; n as usize];
    let g = ext.generator();
    let mut h = ext.one();
    for (i, slot) in table.iter_mut().enumerate() {
        *slot = ext.trace(&h) as u16;
        if let Some(ts) = wanted.get(&ext.index(&h)) {
            for &t in ts {
                logs[t] = i as u64;
            }
        }
        h = ext.mul(&h, g);
    }
    (table, logs)
}

fn chunk_ranges(outer: u128) -> Vec<(u128, u128)> {
    let parts = (rayon::current_num_threads() as u128 * 8).min(outer).max(1);
    (0..parts).map(|i| (outer * i / parts, outer * (i + 1) / parts)).collect()
}

fn mixed_radix(mut idx: u128, radix: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % u128::from(radix)) as u64;
        idx /= u128::from(radix);
    }
    out
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(n)) as u64
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn checked_pow(p: u64, k: usize) -> Option<u64> {
    (0..k).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

fn digits(mut n: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Polynomials over `F_p` as little-endian `u64` vectors.
pub mod upoly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let da = a.len() - 1;
            let f = a[da] * lead_inv % p;
            for (j, &mj) in m.iter().enumerate() {
                let idx = da - dm + j;
                a[idx] = (a[idx] + (p - mj) * f % p) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = inv_mod(lead, p);
            a.iter_mut().for_each(|c| *c = *c * inv % p);
        }
        a
    }

    /// `gcd(f, x^{p^i} - x) = 1` for every `i <= deg f / 2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        let mut xp = vec![0, 1];
        for _ in 1..=n / 2 {
            // xp <- xp^p mod f
            let mut acc = vec![1u64];
            let mut base = xp.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base, &f, p);
                }
                base = mul_mod(&base, &base, &f, p);
                e >>= 1;
            }
            xp = acc;
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            if gcd(&f, &diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}
