//! Commutative polynomials and a small Buchberger-based solver.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("elimination bound exceeded: {0}")]
    BoundExceeded(String),
}

pub type Exps = Vec<u32>;

/// Commutative polynomial in `nvars` variables over [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Exps, Scalar>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> CommPoly {
        CommPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> CommPoly {
        let mut p = CommPoly::zero(nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> CommPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = CommPoly::zero(nvars);
        p.add_term(e, &Scalar::one());
        p
    }

    /// Σ coeffs[i]·v_i, a linear form.
    pub fn linear(coeffs: &[Scalar]) -> CommPoly {
        let n = coeffs.len();
        let mut p = CommPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            let key: Vec<Exps> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, o: &CommPoly) -> CommPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &CommPoly) -> CommPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), &-c);
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.nvars);
        }
        CommPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &CommPoly) -> CommPoly {
        let mut acc: HashMap<Exps, Scalar> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Scalar::zero) += &(ca * cb);
            }
        }
        CommPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut r = CommPoly::constant(self.nvars, Scalar::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, pt: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            s += &t;
        }
        s
    }

    /// Substitute each variable by a polynomial of a common target ring.
    pub fn compose(&self, images: &[CommPoly], target_nvars: usize) -> CommPoly {
        let mut out = CommPoly::zero(target_nvars);
        let mut cache: HashMap<(usize, u32), CommPoly> = HashMap::new();
        for (e, c) in &self.terms {
            let mut t = CommPoly::constant(target_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let p = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                    t = t.mul(&p);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Which variables actually occur.
    pub fn support(&self) -> Vec<bool> {
        let mut s = vec![false; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    s[i] = true;
                }
            }
        }
        s
    }

    /// Coefficients (ascending) when only variable `v` occurs.
    pub fn univariate(&self, v: usize) -> Option<Vec<Scalar>> {
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != v && k > 0) {
                return None;
            }
            let k = e[v] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Scalar::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(coeffs)
    }

    pub fn field(&self) -> FieldSpec {
        self.terms.values().fold(FieldSpec::Rationals, |f, c| f.join(c.field()).unwrap_or(f))
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let m = mono.join("*");
            parts.push(if m.is_empty() {
                c.to_string()
            } else if c.is_one() {
                m
            } else if (-c).is_one() {
                format!("-{m}")
            } else {
                format!("{c}*{m}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(&refs))
    }
}

/// Determinant of a square matrix of polynomials, by expansion along rows
/// with memoization over column subsets.
pub fn poly_det(m: &[Vec<CommPoly>], nvars: usize) -> CommPoly {
    let n = m.len();
    if n == 0 {
        return CommPoly::constant(nvars, Scalar::one());
    }
    // dp[mask] = det of the first popcount(mask) rows restricted to columns in mask
    let mut dp: HashMap<u32, CommPoly> = HashMap::new();
    dp.insert(0, CommPoly::constant(nvars, Scalar::one()));
    for row in 0..n {
        let mut next: HashMap<u32, CommPoly> = HashMap::new();
        for (mask, val) in &dp {
            if val.is_zero() {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 || m[row][col].is_zero() {
                    continue;
                }
                // sign: number of used columns greater than col
                let above = (mask >> (col + 1)).count_ones();
                let mut t = val.mul(&m[row][col]);
                if above % 2 == 1 {
                    t = t.scale(&Scalar::int(-1));
                }
                let e = next.entry(mask | (1 << col)).or_insert_with(|| CommPoly::zero(nvars));
                *e = e.add(&t);
            }
        }
        dp = next;
    }
    dp.remove(&((1u32 << n) - 1)).unwrap_or_else(|| CommPoly::zero(nvars))
}

/// Monomial orders for Buchberger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Lex,
    GrLex,
    GRevLex,
}

impl TermOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::GrLex => da.cmp(&db).then_with(|| a.cmp(b)),
            TermOrder::GRevLex => da.cmp(&db).then_with(|| {
                for i in (0..a.len()).rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

fn lead<'a>(p: &'a CommPoly, ord: TermOrder) -> Option<(&'a Exps, &'a Scalar)> {
    p.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_times(p: &CommPoly, e: &[u32], c: &Scalar) -> CommPoly {
    CommPoly {
        nvars: p.nvars,
        terms: p.terms.iter().map(|(k, v)| (k.iter().zip(e).map(|(x, y)| x + y).collect(), v * c)).collect(),
    }
}

/// Full reduction of `p` modulo `basis` (all terms).
pub fn reduce(p: &CommPoly, basis: &[CommPoly], ord: TermOrder) -> CommPoly {
    let leads: Vec<(Exps, Scalar)> = basis.iter().map(|g| {
        let (e, c) = lead(g, ord).unwrap();
        (e.clone(), c.clone())
    }).collect();
    let mut rem = CommPoly::zero(p.nvars);
    let mut work = p.clone();
    while let Some((e, c)) = lead(&work, ord).map(|(e, c)| (e.clone(), c.clone())) {
        let hit = leads.iter().position(|(le, _)| divides(le, &e));
        match hit {
            Some(i) => {
                let shift: Exps = e.iter().zip(&leads[i].0).map(|(x, y)| x - y).collect();
                let f = &c * &leads[i].1.inv().unwrap();
                work = work.sub(&mono_times(&basis[i], &shift, &f));
            }
            None => {
                rem.add_term(e.clone(), &c);
                work.terms.remove(&e);
            }
        }
    }
    rem
}

fn monic(p: &CommPoly, ord: TermOrder) -> CommPoly {
    match lead(p, ord) {
        Some((_, c)) => p.scale(&c.inv().unwrap()),
        None => p.clone(),
    }
}

/// Reduced Gröbner basis. `max_size` bounds the intermediate basis.
pub fn groebner(polys: &[CommPoly], ord: TermOrder, max_size: usize) -> Result<Vec<CommPoly>, ElimError> {
    let mut basis: Vec<CommPoly> = Vec::new();
    for p in polys {
        let r = reduce(p, &basis, ord);
        if !r.is_zero() {
            basis.push(monic(&r, ord));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lcm(lead(&basis[a.0], ord).unwrap().0, lead(&basis[a.1], ord).unwrap().0);
                let lb = lcm(lead(&basis[b.0], ord).unwrap().0, lead(&basis[b.1], ord).unwrap().0);
                ord.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        let (ei, ci) = lead(&basis[i], ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let (ej, cj) = lead(&basis[j], ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        // product criterion
        if ei.iter().zip(&ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = lcm(&ei, &ej);
        // chain criterion
        let chain = (0..basis.len()).any(|m| {
            m != i && m != j && divides(lead(&basis[m], ord).unwrap().0, &l) && {
                let (a, b) = (i.min(m), i.max(m));
                let (c, d) = (j.min(m), j.max(m));
                !pairs.contains(&(a, b)) && !pairs.contains(&(c, d))
            }
        });
        if chain {
            continue;
        }
        let si: Exps = l.iter().zip(&ei).map(|(a, b)| a - b).collect();
        let sj: Exps = l.iter().zip(&ej).map(|(a, b)| a - b).collect();
        let s = mono_times(&basis[i], &si, &ci.inv().unwrap()).sub(&mono_times(&basis[j], &sj, &cj.inv().unwrap()));
        let r = reduce(&s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        if r.total_degree() == Some(0) {
            return Ok(vec![CommPoly::constant(r.nvars, Scalar::one())]);
        }
        basis.push(monic(&r, ord));
        if basis.len() > max_size {
            return Err(ElimError::BoundExceeded(format!("basis exceeded {max_size} elements")));
        }
        let n = basis.len() - 1;
        for m in 0..n {
            pairs.push((m, n));
        }
    }
    // inter-reduce
    basis.sort_by(|a, b| ord.cmp(lead(a, ord).unwrap().0, lead(b, ord).unwrap().0));
    let mut minimal: Vec<CommPoly> = Vec::new();
    for g in &basis {
        let lg = lead(g, ord).unwrap().0.clone();
        if !basis.iter().any(|h| {
            let lh = lead(h, ord).unwrap().0;
            lh != &lg && divides(lh, &lg)
        }) && !minimal.iter().any(|h| lead(h, ord).unwrap().0 == &lg)
        {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::new();
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<CommPoly> = minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, h)| h.clone()).collect();
        let (le, lc) = lead(g, ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut head = CommPoly::zero(g.nvars);
        head.add_term(le.clone(), &lc);
        let tail = reduce(&g.sub(&head), &others, ord);
        reduced.push(monic(&head.add(&tail), ord));
    }
    if reduced.iter().any(|g| g.total_degree() == Some(0)) {
        let n = reduced[0].nvars;
        return Ok(vec![CommPoly::constant(n, Scalar::one())]);
    }
    Ok(reduced)
}

pub fn is_unit_ideal(gb: &[CommPoly]) -> bool {
    gb.iter().any(|g| g.total_degree() == Some(0) && !g.is_zero())
}

/// Zero-dimensionality test on a Gröbner basis: every variable has a pure
/// power among the leading monomials.
pub fn is_zero_dimensional(gb: &[CommPoly], ord: TermOrder) -> bool {
    if gb.is_empty() {
        return false;
    }
    let n = gb[0].nvars;
    (0..n).all(|v| {
        gb.iter().any(|g| {
            let (e, _) = lead(g, ord).unwrap();
            e[v] > 0 && e.iter().enumerate().all(|(i, &k)| i == v || k == 0)
        })
    })
}

/// Whether `p` vanishes on V(gb): some power p^k (k ≤ max_pow) reduces to 0.
pub fn in_radical(p: &CommPoly, gb: &[CommPoly], ord: TermOrder, max_pow: u32) -> bool {
    if is_unit_ideal(gb) {
        return true;
    }
    let mut q = reduce(p, gb, ord);
    for _ in 1..max_pow {
        if q.is_zero() {
            return true;
        }
        q = reduce(&q.mul(p), gb, ord);
    }
    q.is_zero()
}

// ---------------------------------------------------------------- roots

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn numeric_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lc = coeffs[n];
    let mon: Vec<C64> = coeffs.iter().map(|&c| cdiv(c, lc)).collect();
    let eval = |z: C64| {
        let mut r = (0.0, 0.0);
        for c in mon.iter().rev() {
            r = cmul(r, z);
            r = (r.0 + c.0, r.1 + c.1);
        }
        r
    };
    let radius = 1.0 + mon.iter().take(n).map(|c| (c.0 * c.0 + c.1 * c.1).sqrt()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (radius * 0.5 * t.cos(), radius * 0.5 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            if den.0 == 0.0 && den.1 == 0.0 {
                den = (1e-12, 0.0);
            }
            let step = cdiv(eval(z[i]), den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

fn eval_uni(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut r = Scalar::zero();
    for c in coeffs.iter().rev() {
        r = &(&r * x) + c;
    }
    r
}

fn deflate(coeffs: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    let n = coeffs.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (1..=n).rev() {
        carry = &(&carry * root) + &coeffs[k];
        q[k - 1] = carry.clone();
    }
    q
}

fn trim(mut c: Vec<Scalar>) -> Vec<Scalar> {
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    c
}

fn rat_candidates(x: f64) -> Vec<BigRational> {
    let mut v = Vec::new();
    for den in [1000, 100000, 10_000_000] {
        if let Some(q) = Scalar::approx_rational(x, den) {
            if !v.contains(&q) {
                v.push(q);
            }
        }
    }
    v
}

/// Remainder of a by b (ascending coefficients, b nonzero).
fn uni_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero divisor");
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            r[i + k] -= &(&q * c);
        }
        r.pop();
        if r.is_empty() {
            r.push(Scalar::zero());
        }
        r = trim(r);
    }
    r
}

/// Exact quotient of a by b.
fn uni_div(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero divisor");
    let mut q = vec![Scalar::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= &(&c * bc);
        }
        q[k] = c;
        r.pop();
        if r.is_empty() {
            r.push(Scalar::zero());
        }
        r = trim(r);
    }
    trim(q)
}

fn uni_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// p / gcd(p, p'): same roots, all simple.
fn squarefree(p: &[Scalar]) -> Vec<Scalar> {
    if p.len() <= 2 {
        return p.to_vec();
    }
    let dp: Vec<Scalar> = p.iter().enumerate().skip(1).map(|(k, c)| &Scalar::int(k as i64) * c).collect();
    let g = uni_gcd(p, &dp);
    if g.len() == 1 {
        p.to_vec()
    } else {
        uni_div(p, &g)
    }
}

/// Roots of a univariate polynomial (ascending coefficients) lying in
/// `field`, with multiplicity removed, plus the unsplit remainder.
pub fn roots_in_field(coeffs: &[Scalar], field: FieldSpec) -> (Vec<Scalar>, Vec<Scalar>) {
    // numeric root isolation is only reliable for simple roots
    let mut p = squarefree(&trim(coeffs.to_vec()));
    let mut roots: Vec<Scalar> = Vec::new();
    let push = |roots: &mut Vec<Scalar>, r: Scalar| {
        if !roots.contains(&r) {
            roots.push(r);
        }
    };
    loop {
        let deg = p.len() - 1;
        if deg == 0 {
            return (roots, p);
        }
        if p[0].is_zero() {
            push(&mut roots, Scalar::zero());
            p = p[1..].to_vec();
            continue;
        }
        if deg == 1 {
            push(&mut roots, -(&p[0] * &p[1].inv().unwrap()));
            return (roots, vec![Scalar::one()]);
        }
        if deg == 2 {
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = &(b * b) - &(&Scalar::int(4) * &(a * c));
            if let Some(s) = disc.sqrt_in(field) {
                let den = (&Scalar::int(2) * a).inv().unwrap();
                push(&mut roots, &(&(-b) + &s) * &den);
                push(&mut roots, &(&(-b) - &s) * &den);
                return (roots, vec![Scalar::one()]);
            }
            return (roots, p);
        }
        match find_one_root(&p, field) {
            Some(r) => {
                push(&mut roots, r.clone());
                p = trim(deflate(&p, &r));
            }
            None => return (roots, p),
        }
    }
}

fn find_one_root(p: &[Scalar], field: FieldSpec) -> Option<Scalar> {
    let num: Vec<C64> = p.iter().map(Scalar::to_complex).collect();
    let zs = numeric_roots(&num);
    let d = field.d();
    let check = |s: Scalar| -> Option<Scalar> { eval_uni(p, &s).is_zero().then_some(s) };
    // rational candidates first
    for z in &zs {
        if z.1.abs() < 1e-7 {
            for q in rat_candidates(z.0) {
                if let Some(s) = check(Scalar::rational(q)) {
                    return Some(s);
                }
            }
        }
    }
    if d == 0 {
        return None;
    }
    let sd = field.sqrt_d().unwrap();
    if d < 0 {
        let rt = ((-d) as f64).sqrt();
        for z in &zs {
            for a in rat_candidates(z.0) {
                for b in rat_candidates(z.1 / rt) {
                    let s = &Scalar::rational(a.clone()) + &(&Scalar::rational(b) * &sd);
                    if let Some(s) = check(s) {
                        return Some(s);
                    }
                }
            }
        }
        return None;
    }
    let conj: Vec<C64> = p.iter().map(|c| c.conj().to_complex()).collect();
    let ws = numeric_roots(&conj);
    let rt = (d as f64).sqrt();
    for z in &zs {
        for w in &ws {
            if z.1.abs() > 1e-7 || w.1.abs() > 1e-7 {
                continue;
            }
            for a in rat_candidates((z.0 + w.0) / 2.0) {
                for b in rat_candidates((z.0 - w.0) / (2.0 * rt)) {
                    let s = &Scalar::rational(a.clone()) + &(&Scalar::rational(b) * &sd);
                    if let Some(s) = check(s) {
                        return Some(s);
                    }
                }
            }
        }
    }
    None
}

/// Result of [`eliminate_small`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solutions {
    /// All solutions over the algebraic closure lie in the field.
    Finite(Vec<Vec<Scalar>>),
    /// Finitely many solutions, some of which need a larger field.
    Residue { points: Vec<Vec<Scalar>>, eliminant: String },
    PositiveDimensional,
}

impl Solutions {
    pub fn points(&self) -> &[Vec<Scalar>] {
        match self {
            Solutions::Finite(p) | Solutions::Residue { points: p, .. } => p,
            Solutions::PositiveDimensional => &[],
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Solutions::Finite(_))
    }
}

/// Solve a small polynomial system over `field`.
pub fn eliminate_small(system: &[CommPoly], field: FieldSpec) -> Result<Solutions, ElimError> {
    let nvars = system.first().map(|p| p.nvars).unwrap_or(0);
    if nvars > 4 {
        return Err(ElimError::BoundExceeded(format!("{nvars} variables")));
    }
    let sys: Vec<CommPoly> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nvars == 0 {
        let consistent = sys.iter().all(|p| p.is_zero());
        return Ok(Solutions::Finite(if consistent { vec![vec![]] } else { vec![] }));
    }
    if sys.is_empty() {
        return Ok(Solutions::PositiveDimensional);
    }
    let gb = groebner(&sys, TermOrder::GRevLex, 400)?;
    if is_unit_ideal(&gb) {
        return Ok(Solutions::Finite(vec![]));
    }
    if !is_zero_dimensional(&gb, TermOrder::GRevLex) {
        return Ok(Solutions::PositiveDimensional);
    }
    let lex = groebner(&gb, TermOrder::Lex, 400)?;
    solve_triangular(&lex, nvars, field)
}

fn solve_triangular(lex: &[CommPoly], nvars: usize, field: FieldSpec) -> Result<Solutions, ElimError> {
    let last = nvars - 1;
    // univariate eliminant in the last (smallest) variable
    let uni = lex
        .iter()
        .filter_map(|g| g.univariate(last))
        .filter(|c| c.len() > 1)
        .min_by_key(|c| c.len())
        .ok_or_else(|| ElimError::BoundExceeded("no eliminant".into()))?;
    let (roots, rest) = roots_in_field(&uni, field);
    let mut residue = if rest.len() > 1 {
        let names: Vec<String> = (0..nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut p = CommPoly::zero(nvars);
        for (k, c) in rest.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[last] = k as u32;
            p.add_term(e, c);
        }
        Some(p.render(&refs))
    } else {
        None
    };
    let mut points = Vec::new();
    for r in roots {
        if last == 0 {
            points.push(vec![r]);
            continue;
        }
        // substitute and solve the remaining variables
        let images: Vec<CommPoly> = (0..nvars)
            .map(|i| if i == last { CommPoly::constant(last, r.clone()) } else { CommPoly::var(last, i) })
            .collect();
        let sub: Vec<CommPoly> = lex.iter().map(|g| g.compose(&images, last)).filter(|g| !g.is_zero()).collect();
        if sub.is_empty() {
            return Ok(Solutions::PositiveDimensional);
        }
        let gb = groebner(&sub, TermOrder::Lex, 400)?;
        if is_unit_ideal(&gb) {
            continue;
        }
        if !is_zero_dimensional(&gb, TermOrder::Lex) {
            return Ok(Solutions::PositiveDimensional);
        }
        match solve_triangular(&gb, last, field)? {
            Solutions::Finite(ps) => points.extend(ps.into_iter().map(|mut p| {
                p.push(r.clone());
                p
            })),
            Solutions::Residue { points: ps, eliminant } => {
                points.extend(ps.into_iter().map(|mut p| {
                    p.push(r.clone());
                    p
                }));
                residue.get_or_insert(eliminant);
            }
            Solutions::PositiveDimensional => return Ok(Solutions::PositiveDimensional),
        }
    }
    Ok(match residue {
        None => Solutions::Finite(points),
        Some(e) => Solutions::Residue { points, eliminant: e },
    })
}
