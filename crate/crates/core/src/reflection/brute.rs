//! Exhaustive search for SP solutions K(λ) = A + λB with B on a small integer
//! grid, used as an independent oracle for the classifier.
//!
//! The residual is quadratic in the pair (A, B). For a fixed B the equations whose
//! keys never see an A·A product are linear in A; they are solved exactly and the
//! remaining quadratic part is checked on the resulting affine family.

use std::collections::{BTreeMap, HashMap};

use super::{classify_family, even_positions, sp_re_bilinear, KFamily, SpClass, SpClassification};
use crate::graded_tensor::{solve_affine, BiPoly, DenseExact, ExactScalar, GradingSignature, OpMatrix};

#[derive(Clone, Debug)]
pub struct BruteForceOptions {
    /// Grid of integer values for the entries of B (and of A when B = 0).
    pub values: Vec<i64>,
    /// Restrict to grading-preserving entries; defaults to true for graded spaces.
    pub even_only: Option<bool>,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions { values: vec![-1, 0, 1], even_only: None }
    }
}

/// `A = particular + span(directions)` together with a fixed B.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub b: OpMatrix<ExactScalar>,
    pub a_particular: OpMatrix<ExactScalar>,
    pub a_directions: Vec<OpMatrix<ExactScalar>>,
    /// Only isolated points of a larger affine space solve the equation.
    pub partial: bool,
    pub classification: SpClassification,
}

#[derive(Clone, Debug, Default)]
pub struct BruteForceResult {
    pub families: Vec<SolutionFamily>,
    pub b_candidates: usize,
    pub singular_dropped: usize,
    /// Families whose quadratic remainder could not be resolved exactly.
    pub unresolved: usize,
    pub class_counts: BTreeMap<String, usize>,
}

impl BruteForceResult {
    /// Every invertible solution found fits the classification.
    pub fn all_classified(&self) -> bool {
        self.unresolved == 0
            && self.families.iter().all(|f| {
                matches!(f.classification.class, SpClass::Diagonalizable { .. } | SpClass::Nilpotent)
            })
    }
}

type Gauss = (i64, i64);
type Sparse = Vec<(usize, Gauss)>;

struct Tensor {
    n: usize,
    /// phi[u * 2n + w]: residual with basis unknown u in the first K and w in the second.
    phi: Vec<Sparse>,
    keys: usize,
    touched_by_a: Vec<bool>,
    touched_by_aa: Vec<bool>,
}

fn gauss(s: &ExactScalar) -> Gauss {
    let (re, im) = s.as_gaussian_int().expect("integer residual coefficient");
    (i64::try_from(re).expect("small"), i64::try_from(im).expect("small"))
}

fn unit_family(d: usize, pos: (usize, usize), b_role: bool) -> KFamily {
    let e = OpMatrix::from_triplets(d, 1, [(pos.0, pos.1, ExactScalar::one())]);
    if b_role {
        KFamily { a: OpMatrix::zero(d, 1), b: e }
    } else {
        KFamily::constant(e)
    }
}

impl Tensor {
    fn build(sig: &GradingSignature, positions: &[(usize, usize)]) -> Self {
        let d = sig.dim();
        let n = positions.len();
        let basis: Vec<KFamily> = (0..2 * n).map(|u| unit_family(d, positions[u % n], u >= n)).collect();
        let mut key_ids: HashMap<(usize, usize, u32, u32), usize> = HashMap::new();
        let mut phi = Vec::with_capacity(4 * n * n);
        for ku in &basis {
            for kw in &basis {
                let res: OpMatrix<BiPoly> = sp_re_bilinear(ku, kw, sig);
                let mut sparse = Vec::new();
                for (r, c, p) in res.entries() {
                    for (&(a, b), coef) in p.terms() {
                        let next = key_ids.len();
                        let id = *key_ids.entry((r, c, a, b)).or_insert(next);
                        sparse.push((id, gauss(coef)));
                    }
                }
                phi.push(sparse);
            }
        }
        let keys = key_ids.len();
        let mut touched_by_a = vec![false; keys];
        let mut touched_by_aa = vec![false; keys];
        for u in 0..2 * n {
            for w in 0..2 * n {
                for &(k, _) in &phi[u * 2 * n + w] {
                    if u < n || w < n {
                        touched_by_a[k] = true;
                    }
                    if u < n && w < n {
                        touched_by_aa[k] = true;
                    }
                }
            }
        }
        Tensor { n, phi, keys, touched_by_a, touched_by_aa }
    }

    fn get(&self, u: usize, w: usize) -> &Sparse {
        &self.phi[u * 2 * self.n + w]
    }

    /// Q restricted to the given roles, integer coefficients.
    fn quad_int(&self, coeffs: &[(usize, i64)]) -> Vec<Gauss> {
        let mut out = vec![(0, 0); self.keys];
        for &(u, cu) in coeffs {
            for &(w, cw) in coeffs {
                for &(k, (re, im)) in self.get(u, w) {
                    out[k].0 += cu * cw * re;
                    out[k].1 += cu * cw * im;
                }
            }
        }
        out
    }

    /// Bilinear form F(x, y) summed over both orderings' natural roles, exact.
    fn bilinear(&self, x: &[ExactScalar], y: &[ExactScalar]) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(); self.keys];
        for (u, xu) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (w, yw) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = xu * yw;
                for &(k, (re, im)) in self.get(u, w) {
                    out[k] = &out[k] + &(&f * &ExactScalar::gaussian(re, im));
                }
            }
        }
        out
    }
}

fn to_op(d: usize, positions: &[(usize, usize)], coeffs: &[ExactScalar]) -> OpMatrix<ExactScalar> {
    OpMatrix::from_triplets(d, 1, positions.iter().zip(coeffs).map(|(&(i, j), c)| (i, j, c.clone())).collect::<Vec<_>>())
}

enum Outcome {
    Families(Found),
    None,
    Unresolved,
}

fn embed_a(n: usize, a: &[ExactScalar], b: &[i64]) -> Vec<ExactScalar> {
    let mut v = a.to_vec();
    v.extend(b.iter().map(|&x| ExactScalar::int(x)));
    debug_assert_eq!(v.len(), 2 * n);
    v
}

fn zero_pad(n: usize, a: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut v = a.to_vec();
    v.resize(2 * n, ExactScalar::zero());
    v
}

/// Solves for A with B fixed.
fn solve_for_a(t: &Tensor, b: &[i64]) -> Outcome {
    let n = t.n;
    let b_coeffs: Vec<(usize, i64)> = b.iter().enumerate().filter(|(_, v)| **v != 0).map(|(p, &v)| (n + p, v)).collect();
    let qbb = t.quad_int(&b_coeffs);
    if (0..t.keys).any(|k| !t.touched_by_a[k] && qbb[k] != (0, 0)) {
        return Outcome::None;
    }
    // Linear rows: keys with no A·A contribution.
    let mut lin: Vec<Vec<Gauss>> = vec![vec![(0, 0); n]; t.keys];
    for p in 0..n {
        for &(w, bw) in &b_coeffs {
            for &(k, (re, im)) in t.get(p, w).iter().chain(t.get(w, p)) {
                lin[k][p].0 += bw * re;
                lin[k][p].1 += bw * im;
            }
        }
    }
    let rows: Vec<usize> = (0..t.keys)
        .filter(|&k| !t.touched_by_aa[k] && (qbb[k] != (0, 0) || lin[k].iter().any(|c| *c != (0, 0))))
        .collect();
    let mut m = DenseExact::zeros(rows.len(), n);
    let mut rhs = Vec::with_capacity(rows.len());
    for (r, &k) in rows.iter().enumerate() {
        for p in 0..n {
            m.set(r, p, ExactScalar::gaussian(lin[k][p].0, lin[k][p].1));
        }
        rhs.push(-ExactScalar::gaussian(qbb[k].0, qbb[k].1));
    }
    let Some(sol) = solve_affine(&m, &rhs) else {
        return Outcome::None;
    };
    if sol.kernel.is_empty() {
        let c0 = embed_a(n, &sol.particular, b);
        return if t.bilinear(&c0, &c0).iter().all(ExactScalar::is_zero) {
            Outcome::Families(vec![(Affine { particular: sol.particular, directions: vec![] }, false)])
        } else {
            Outcome::None
        };
    }
    let c0 = embed_a(n, &sol.particular, b);
    let dirs: Vec<Vec<ExactScalar>> = sol.kernel.iter().map(|k| zero_pad(n, k)).collect();
    let r = dirs.len();
    // Q(c0 + Σ s_i d_i) as quadratic polynomials in the kernel coordinates s.
    let mut eqs: Vec<QPoly> = vec![QPoly::zero(r); t.keys];
    for (k, v) in t.bilinear(&c0, &c0).into_iter().enumerate() {
        eqs[k].add_term(vec![0; r], v);
    }
    for (i, di) in dirs.iter().enumerate() {
        let a = t.bilinear(&c0, di);
        let b2 = t.bilinear(di, &c0);
        for k in 0..t.keys {
            eqs[k].add_term(unit_exp(r, &[i]), &a[k] + &b2[k]);
        }
        for (j, dj) in dirs.iter().enumerate() {
            for (k, v) in t.bilinear(di, dj).into_iter().enumerate() {
                eqs[k].add_term(unit_exp(r, &[i, j]), v);
            }
        }
    }
    let start = Affine { particular: sol.particular, directions: sol.kernel };
    match solve_quadratic_system(eqs, start, 0) {
        Some(fams) => Outcome::Families(fams),
        None => Outcome::Unresolved,
    }
}

fn unit_exp(r: usize, vars: &[usize]) -> Vec<u32> {
    let mut e = vec![0; r];
    for &v in vars {
        e[v] += 1;
    }
    e
}

/// Polynomial of degree ≤ 2 in a few variables.
#[derive(Clone, Debug, PartialEq)]
struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl QPoly {
    fn zero(nvars: usize) -> Self {
        QPoly { nvars, terms: BTreeMap::new() }
    }

    fn add_term(&mut self, e: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(ExactScalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.terms.keys().any(|e| e[v] > 0)).collect()
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                out.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    /// Divides by the leading coefficient so duplicates compare equal.
    fn normalised(mut self) -> Self {
        if let Some(lead) = self.terms.values().next_back().and_then(ExactScalar::inv) {
            for v in self.terms.values_mut() {
                *v = &*v * &lead;
            }
        }
        self
    }

    /// Substitutes `t_j = alpha + Σ beta_i t_i` and drops variable j.
    fn substitute(&self, j: usize, alpha: &ExactScalar, beta: &[ExactScalar]) -> QPoly {
        let m = self.nvars - 1;
        let shrink = |e: &[u32]| -> Vec<u32> { e.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| *x).collect() };
        // The affine replacement as a term list over the remaining variables.
        let mut rep: Vec<(Vec<u32>, ExactScalar)> = vec![(vec![0; m], alpha.clone())];
        for (i, b) in beta.iter().enumerate() {
            if i != j && !b.is_zero() {
                rep.push((shrink(&unit_exp(self.nvars, &[i])), b.clone()));
            }
        }
        let mut out = QPoly::zero(m);
        for (e, c) in &self.terms {
            let base = shrink(e);
            let mut acc: Vec<(Vec<u32>, ExactScalar)> = vec![(base, c.clone())];
            for _ in 0..e[j] {
                acc = acc
                    .iter()
                    .flat_map(|(ea, ca)| {
                        rep.iter().map(move |(er, cr)| (ea.iter().zip(er).map(|(x, y)| x + y).collect(), ca * cr))
                    })
                    .collect();
            }
            for (e2, c2) in acc {
                out.add_term(e2, c2);
            }
        }
        out
    }
}

/// Writes a quadric with some t_j² term as a product of linear factors when the
/// discriminant in t_j is a perfect square.
fn split_quadric(e: &QPoly) -> Option<Vec<QPoly>> {
    let r = e.nvars;
    let coef = |ex: Vec<u32>| e.terms.get(&ex).cloned().unwrap_or_else(ExactScalar::zero);
    let j = (0..r).find(|&j| !coef(unit_exp(r, &[j, j])).is_zero())?;
    let c2 = coef(unit_exp(r, &[j, j]));
    // Q = c2 t_j² + c1 t_j + c0 with c1 linear and c0 quadratic in the others.
    let mut c1 = QPoly::zero(r);
    let mut c0 = QPoly::zero(r);
    for (ex, c) in &e.terms {
        match ex[j] {
            1 => {
                let mut x = ex.clone();
                x[j] = 0;
                c1.add_term(x, c.clone());
            }
            0 => c0.add_term(ex.clone(), c.clone()),
            _ => {}
        }
    }
    let mut disc = c1.mul(&c1);
    for (ex, c) in &c0.terms {
        disc.add_term(ex.clone(), &(&ExactScalar::int(-4) * &c2) * c);
    }
    let root = quadratic_form_sqrt(&disc)?;
    let mut factors = Vec::new();
    for sign in [1, -1] {
        // t_j − (−c1 ± root)/(2 c2)
        let inv = (&ExactScalar::int(2) * &c2).inv().expect("non-zero");
        let mut f = QPoly::zero(r);
        f.add_term(unit_exp(r, &[j]), ExactScalar::one());
        for (ex, c) in &c1.terms {
            f.add_term(ex.clone(), c * &inv);
        }
        for (ex, c) in &root.terms {
            f.add_term(ex.clone(), &(&ExactScalar::int(-sign) * c) * &inv);
        }
        if !factors.contains(&f) {
            factors.push(f);
        }
    }
    Some(factors)
}

/// ℓ with ℓ² = q for a polynomial q of degree ≤ 2 in the variables and a
/// constant, or `None` if q is not a square.
fn quadratic_form_sqrt(q: &QPoly) -> Option<QPoly> {
    let r = q.nvars;
    if q.is_zero() {
        return Some(QPoly::zero(r));
    }
    // Homogeneous coordinates: index r stands for the constant 1.
    let exp = |a: usize, b: usize| -> Vec<u32> {
        let mut e = vec![0; r];
        for v in [a, b] {
            if v < r {
                e[v] += 1;
            }
        }
        e
    };
    let coef = |a: usize, b: usize| q.terms.get(&exp(a, b)).cloned().unwrap_or_else(ExactScalar::zero);
    let k = (0..=r).find(|&k| !coef(k, k).is_zero())?;
    let lk = super::classify::gaussian_sqrt(&coef(k, k))?;
    let two_lk_inv = (&ExactScalar::int(2) * &lk).inv().expect("non-zero");
    let mut l = QPoly::zero(r);
    for m in 0..=r {
        let c = if m == k { lk.clone() } else { &coef(k, m) * &two_lk_inv };
        l.add_term(exp(m, r), c);
    }
    (l.mul(&l) == *q).then_some(l)
}

#[derive(Clone, Debug)]
struct Affine {
    particular: Vec<ExactScalar>,
    directions: Vec<Vec<ExactScalar>>,
}

impl Affine {
    fn substitute(&self, j: usize, alpha: &ExactScalar, beta: &[ExactScalar]) -> Affine {
        let dj = &self.directions[j];
        let particular = self.particular.iter().zip(dj).map(|(p, d)| p + &(alpha * d)).collect();
        let directions = self
            .directions
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(i, di)| di.iter().zip(dj).map(|(x, d)| x + &(&beta[i] * d)).collect())
            .collect();
        Affine { particular, directions }
    }
}

/// Affine pieces, each flagged when it is a proper subset of the space left by
/// the linear equations.
type Found = Vec<(Affine, bool)>;

/// Common zeros of quadratic equations as a union of affine pieces. Returns
/// `None` when an irreducible multivariate quadric remains.
fn solve_quadratic_system(eqs: Vec<QPoly>, space: Affine, depth: usize) -> Option<Found> {
    let mut uniq: Vec<QPoly> = Vec::new();
    for e in eqs.into_iter().filter(|e| !e.is_zero()) {
        let e = e.normalised();
        if !uniq.contains(&e) {
            uniq.push(e);
        }
    }
    let partial = depth > 0;
    if uniq.is_empty() {
        return Some(vec![(space, partial)]);
    }
    if uniq.iter().any(|e| e.degree() == 0) {
        return Some(vec![]);
    }
    let r = space.directions.len();
    let branch = |j: usize, alpha: ExactScalar, beta: Vec<ExactScalar>, eqs: &[QPoly]| {
        let next: Vec<QPoly> = eqs.iter().map(|e| e.substitute(j, &alpha, &beta)).collect();
        solve_quadratic_system(next, space.substitute(j, &alpha, &beta), depth + 1)
    };
    // A linear equation eliminates one variable.
    if let Some(e) = uniq.iter().find(|e| e.degree() == 1) {
        let j = e.vars()[0];
        let cj = e.terms[&unit_exp(r, &[j])].clone();
        let inv = cj.inv().expect("non-zero");
        let alpha = -&(&e.terms.get(&vec![0; r]).cloned().unwrap_or_else(ExactScalar::zero) * &inv);
        let beta: Vec<ExactScalar> = (0..r)
            .map(|i| if i == j { ExactScalar::zero() } else { -&(&e.terms.get(&unit_exp(r, &[i])).cloned().unwrap_or_else(ExactScalar::zero) * &inv) })
            .collect();
        return branch(j, alpha, beta, &uniq);
    }
    // t_j · L(t): split into t_j = 0 and L = 0.
    for e in &uniq {
        for j in 0..r {
            if e.terms.keys().all(|ex| ex[j] > 0) {
                let zero = vec![ExactScalar::zero(); r];
                let mut out = branch(j, ExactScalar::zero(), zero, &uniq)?;
                let mut lin = QPoly::zero(r);
                for (ex, c) in &e.terms {
                    let mut ex = ex.clone();
                    ex[j] -= 1;
                    lin.add_term(ex, c.clone());
                }
                let mut with_l = uniq.clone();
                with_l.push(lin);
                let rest = solve_quadratic_system(with_l, space.clone(), depth + 1)?;
                out.extend(rest);
                return Some(out.into_iter().map(|(a, _)| (a, true)).collect());
            }
        }
    }
    // A quadric that splits into linear factors: union over the factors.
    for e in &uniq {
        if let Some(factors) = split_quadric(e) {
            let mut out: Found = Vec::new();
            for f in factors {
                let mut with_f = uniq.clone();
                with_f.push(f);
                for piece in solve_quadratic_system(with_f, space.clone(), depth + 1)? {
                    if !out.iter().any(|(a, _)| a.particular == piece.0.particular && a.directions == piece.0.directions) {
                        out.push((piece.0, true));
                    }
                }
            }
            return Some(out);
        }
    }
    // Univariate quadratic: exact roots over Q(i).
    if let Some(e) = uniq.iter().find(|e| e.vars().len() == 1) {
        let j = e.vars()[0];
        let get = |k: u32| e.terms.get(&{ let mut x = vec![0; r]; x[j] = k; x }).cloned().unwrap_or_else(ExactScalar::zero);
        let (c0, c1, c2) = (get(0), get(1), get(2));
        let disc = &(&c1 * &c1) - &(&ExactScalar::int(4) * &(&c2 * &c0));
        let sq = super::classify::gaussian_sqrt(&disc)?;
        let den = (&ExactScalar::int(2) * &c2).inv().expect("quadratic");
        let mut out = Vec::new();
        for root in [&(&-c1.clone() + &sq) * &den, &(&-c1.clone() - &sq) * &den] {
            for f in branch(j, root, vec![ExactScalar::zero(); r], &uniq)? {
                if !out.iter().any(|(a, _): &(Affine, bool)| a.particular == f.0.particular && a.directions == f.0.directions) {
                    out.push((f.0, true));
                }
            }
        }
        return Some(out);
    }
    None
}

fn grid(values: &[i64], n: usize) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total = values.len().pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let v = values[idx % values.len()];
                idx /= values.len();
                v
            })
            .collect()
    })
}

/// Generic point of an affine family.
fn representative(particular: &[ExactScalar], directions: &[Vec<ExactScalar>], shift: i64) -> Vec<ExactScalar> {
    let mut a = particular.to_vec();
    for (j, dir) in directions.iter().enumerate() {
        let s = ExactScalar::ratio(2 * j as i64 + 3 + shift, 7 + 2 * shift);
        for (x, y) in a.iter_mut().zip(dir) {
            *x = &*x + &(&s * y);
        }
    }
    a
}

/// Searches B over `values^n` (first non-zero entry normalised to +1) and B = 0
/// with A on the grid; every invertible solution family is classified.
pub fn brute_force_sp_solutions(sig: &GradingSignature, opts: &BruteForceOptions) -> BruteForceResult {
    let d = sig.dim();
    let even_only = opts.even_only.unwrap_or(sig.is_graded());
    let positions: Vec<(usize, usize)> =
        if even_only { even_positions(sig) } else { (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect() };
    let n = positions.len();
    let t = Tensor::build(sig, &positions);
    let mut out = BruteForceResult::default();
    let normalised = |v: &[i64]| v.iter().find(|&&x| x != 0).is_some_and(|&x| x == 1);

    let record = |out: &mut BruteForceResult, b: &[ExactScalar], particular: Vec<ExactScalar>, dirs: Vec<Vec<ExactScalar>>, partial: bool| {
        let bop = to_op(d, &positions, b);
        let mut found = None;
        for shift in 0..3 {
            let a = representative(&particular, &dirs, shift);
            let fam = KFamily { a: to_op(d, &positions, &a), b: bop.clone() };
            if let Ok(c) = classify_family(sig, &fam) {
                found = Some(c);
                break;
            }
        }
        let Some(classification) = found else {
            out.singular_dropped += 1;
            return;
        };
        *out.class_counts.entry(classification.class.label()).or_default() += 1;
        out.families.push(SolutionFamily {
            b: bop,
            a_particular: to_op(d, &positions, &particular),
            a_directions: dirs.iter().map(|v| to_op(d, &positions, v)).collect(),
            partial,
            classification,
        });
    };

    for b in grid(&opts.values, n).filter(|b| normalised(b)) {
        out.b_candidates += 1;
        match solve_for_a(&t, &b) {
            Outcome::Families(fams) => {
                let bs: Vec<ExactScalar> = b.iter().map(|&x| ExactScalar::int(x)).collect();
                for (fam, partial) in fams {
                    record(&mut out, &bs, fam.particular, fam.directions, partial);
                }
            }
            Outcome::Unresolved => out.unresolved += 1,
            Outcome::None => {}
        }
    }
    // B = 0: constant solutions A with A on the grid.
    let zeros = vec![ExactScalar::zero(); n];
    for a in grid(&opts.values, n).filter(|a| normalised(a)) {
        let coeffs: Vec<(usize, i64)> = a.iter().enumerate().filter(|(_, v)| **v != 0).map(|(p, &v)| (p, v)).collect();
        if t.quad_int(&coeffs).iter().all(|c| *c == (0, 0)) {
            let av: Vec<ExactScalar> = a.iter().map(|&x| ExactScalar::int(x)).collect();
            record(&mut out, &zeros, av, vec![], false);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_search_is_fully_classified() {
        let res = brute_force_sp_solutions(&GradingSignature::sl(2), &BruteForceOptions::default());
        assert!(!res.families.is_empty());
        assert!(res.all_classified(), "{:?} unresolved={}", res.class_counts, res.unresolved);
        assert!(res.class_counts.contains_key("nilpotent"));
        assert!(res.class_counts.contains_key("diagonalizable(-1:1,+1:1)"));
    }
}
