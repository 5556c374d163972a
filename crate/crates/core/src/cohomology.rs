//! Weight-graded Chevalley–Eilenberg `H²` with trivial scalar coefficients
//! on cutoff-truncated multiloop algebras.
//!
//! At weight `w` and cutoff `D` the unknowns are the values `ψ(x, y)` on
//! unordered pairs of basis elements with degrees in `[-D, D]^n` summing to
//! `w`. Cocycle equations are imposed on every triple whose three degrees
//! and three pairwise sums all lie in the window.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{factorize, LinearFunctional};
use crate::eqmap::MultiloopAlgebra;
use crate::error::{Error, Result};
use crate::exactnum::{sparse_from_pairs, Scalar, SparseEchelon, SparseRow};
use crate::laurent::{omegabar_weight_dim, Multidegree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffWindow {
    pub weight: Multidegree,
    pub cutoff: u32,
}

impl CutoffWindow {
    pub fn new(weight: Multidegree, cutoff: u32) -> Self {
        CutoffWindow { weight, cutoff }
    }

    pub fn contains(&self, a: &Multidegree) -> bool {
        a.sup_norm() <= self.cutoff as i64
    }

    /// All degrees in `[-D, D]^n`, lexicographically.
    pub fn degrees(&self) -> Vec<Multidegree> {
        let d = self.cutoff as i64;
        let mut out = vec![Vec::new()];
        for _ in 0..self.weight.n() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (-d..=d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Multidegree).collect()
    }

    /// Unordered degree pairs `{a, w - a}` inside the window.
    pub fn degree_pairs(&self) -> Vec<(Multidegree, Multidegree)> {
        self.degrees()
            .into_iter()
            .filter_map(|a| {
                let b = self.weight.sub(&a);
                (self.contains(&b) && a <= b).then_some((a, b))
            })
            .collect()
    }
}

/// Basis element `t^degree ⊗ b_index` of a graded slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub degree: Multidegree,
    pub index: usize,
}

/// Indexing of basis elements, unknown pairs and cocycle equations.
struct Layout {
    labels: Vec<BasisLabel>,
    by_degree: HashMap<Multidegree, Vec<usize>>,
    pairs: Vec<(usize, usize)>,
    pair_pos: HashMap<(usize, usize), usize>,
}

impl Layout {
    fn new(m: &MultiloopAlgebra, window: &CutoffWindow, shuffle: Option<u64>) -> Self {
        let mut labels: Vec<BasisLabel> = window
            .degrees()
            .into_iter()
            .flat_map(|a| (0..m.slice_dim(&a)).map(move |index| BasisLabel { degree: a.clone(), index }))
            .collect();
        if let Some(seed) = shuffle {
            labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut by_degree: HashMap<Multidegree, Vec<usize>> = HashMap::new();
        for (pos, l) in labels.iter().enumerate() {
            by_degree.entry(l.degree.clone()).or_default().push(pos);
        }
        let mut pairs = Vec::new();
        for (p, l) in labels.iter().enumerate() {
            let partner = window.weight.sub(&l.degree);
            if let Some(group) = by_degree.get(&partner) {
                pairs.extend(group.iter().filter(|&&q| q > p).map(|&q| (p, q)));
            }
        }
        pairs.sort_unstable();
        let pair_pos = pairs.iter().enumerate().map(|(i, &pq)| (pq, i)).collect();
        Layout { labels, by_degree, pairs, pair_pos }
    }

    fn position(&self, degree: &Multidegree, index: usize) -> usize {
        self.by_degree[degree]
            .iter()
            .copied()
            .find(|&p| self.labels[p].index == index)
            .expect("label inside the window")
    }

    /// `(pair column, sign)` with `ψ(u, z) = sign * unknown[column]`.
    fn pair_column(&self, u: usize, z: usize) -> Option<(usize, i64)> {
        if u == z {
            return None;
        }
        let (key, sign) = if u < z { ((u, z), 1) } else { ((z, u), -1) };
        Some((self.pair_pos[&key], sign))
    }

    /// Rows of the cocycle system, one per admissible triple `p < q < r`.
    fn equations(&self, m: &MultiloopAlgebra, window: &CutoffWindow) -> Vec<SparseRow> {
        let field = m.field();
        let mut rows = Vec::new();
        let n = self.labels.len();
        for p in 0..n {
            for q in (p + 1)..n {
                let (a, b) = (&self.labels[p].degree, &self.labels[q].degree);
                let ab = a + b;
                let c = window.weight.sub(&ab);
                if !window.contains(&ab) || !window.contains(&c) {
                    continue;
                }
                if !window.contains(&(b + &c)) || !window.contains(&(a + &c)) {
                    continue;
                }
                let Some(group) = self.by_degree.get(&c) else { continue };
                for &r in group.iter().filter(|&&r| r > q) {
                    let mut entries: Vec<(usize, Scalar)> = Vec::new();
                    for (x, y, z) in [(p, q, r), (q, r, p), (r, p, q)] {
                        let (lx, ly) = (&self.labels[x], &self.labels[y]);
                        let s_deg = &lx.degree + &ly.degree;
                        let coords =
                            m.bracket_coords(m.piece_index(&lx.degree), m.piece_index(&ly.degree), lx.index, ly.index);
                        for (s, cs) in coords.iter().enumerate() {
                            if cs.is_zero() {
                                continue;
                            }
                            let u = self.position(&s_deg, s);
                            if let Some((col, sign)) = self.pair_column(u, z) {
                                entries.push((col, cs * &Scalar::from_int(field, sign)));
                            }
                        }
                    }
                    let row = sparse_from_pairs(entries);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// `x ∧ y ↦ (s-th coordinate of [x, y])` for each basis element `s` of the weight-`w` slice.
    fn coboundaries(&self, m: &MultiloopAlgebra) -> Vec<SparseRow> {
        let sdim = self.pairs.first().map_or(0, |&(p, q)| {
            m.slice_dim(&(&self.labels[p].degree + &self.labels[q].degree))
        });
        (0..sdim)
            .map(|s| {
                let entries = self.pairs.iter().enumerate().filter_map(|(col, &(p, q))| {
                    let (lp, lq) = (&self.labels[p], &self.labels[q]);
                    let c = &m.bracket_coords(m.piece_index(&lp.degree), m.piece_index(&lq.degree), lp.index, lq.index)[s];
                    (!c.is_zero()).then(|| (col, c.clone()))
                });
                sparse_from_pairs(entries)
            })
            .collect()
    }
}

/// A weight-`w` 2-cochain on the window, stored on unordered basis pairs;
/// `ψ(y, x) = -ψ(x, y)` is built in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMatrix {
    window: CutoffWindow,
    pairs: Vec<(BasisLabel, BasisLabel)>,
    values: Vec<Scalar>,
}

impl CochainMatrix {
    /// Evaluate `f` on every unordered pair of the window (in canonical order).
    pub fn from_fn(
        m: &MultiloopAlgebra,
        window: &CutoffWindow,
        mut f: impl FnMut(&BasisLabel, &BasisLabel) -> Scalar,
    ) -> Self {
        let layout = Layout::new(m, window, None);
        let pairs: Vec<(BasisLabel, BasisLabel)> =
            layout.pairs.iter().map(|&(p, q)| (layout.labels[p].clone(), layout.labels[q].clone())).collect();
        let values = pairs.iter().map(|(x, y)| f(x, y)).collect();
        CochainMatrix { window: window.clone(), pairs, values }
    }

    pub fn weight(&self) -> &Multidegree {
        &self.window.weight
    }

    pub fn cutoff(&self) -> u32 {
        self.window.cutoff
    }

    pub fn window(&self) -> &CutoffWindow {
        &self.window
    }

    pub fn pairs(&self) -> &[(BasisLabel, BasisLabel)] {
        &self.pairs
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    fn lookup(&self) -> HashMap<(&BasisLabel, &BasisLabel), &Scalar> {
        self.pairs.iter().zip(&self.values).map(|((x, y), v)| ((x, y), v)).collect()
    }

    /// `ψ(x, y)`, zero off the window.
    pub fn value(&self, x: &BasisLabel, y: &BasisLabel) -> Option<Scalar> {
        self.pairs.iter().zip(&self.values).find_map(|((p, q), v)| {
            if p == x && q == y {
                Some(v.clone())
            } else if p == y && q == x {
                Some(-v)
            } else {
                None
            }
        })
    }

    /// Evaluate the cyclic sum `ψ([x,y],z) + ψ([y,z],x) + ψ([z,x],y)` on every
    /// admissible triple directly from the labels.
    pub fn is_cocycle(&self, m: &MultiloopAlgebra) -> bool {
        let table = self.lookup();
        let field = m.field();
        let psi = |u: &BasisLabel, z: &BasisLabel| -> Scalar {
            if u == z {
                return Scalar::zero(field);
            }
            if let Some(v) = table.get(&(u, z)) {
                return (*v).clone();
            }
            table.get(&(z, u)).map(|v| -*v).unwrap_or_else(|| Scalar::zero(field))
        };
        let window = &self.window;
        let mut labels: Vec<BasisLabel> = window
            .degrees()
            .into_iter()
            .flat_map(|a| (0..m.slice_dim(&a)).map(move |index| BasisLabel { degree: a.clone(), index }))
            .collect();
        labels.sort();
        let n = labels.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (&labels[i], &labels[j], &labels[k]);
                    let sum = &(&x.degree + &y.degree) + &z.degree;
                    if sum != window.weight {
                        continue;
                    }
                    let pairwise = [&x.degree + &y.degree, &y.degree + &z.degree, &z.degree + &x.degree];
                    if !pairwise.iter().all(|d| window.contains(d)) {
                        continue;
                    }
                    let mut acc = Scalar::zero(field);
                    for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                        let s_deg = &u.degree + &v.degree;
                        let coords =
                            m.bracket_coords(m.piece_index(&u.degree), m.piece_index(&v.degree), u.index, v.index);
                        for (s, c) in coords.iter().enumerate() {
                            if !c.is_zero() {
                                acc += &(c * &psi(&BasisLabel { degree: s_deg.clone(), index: s }, w));
                            }
                        }
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct H2Result {
    pub window: CutoffWindow,
    pub unknowns: usize,
    pub equations: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h2: usize,
    /// Cocycles spanning a complement of `B` in `Z`.
    pub representatives: Vec<CochainMatrix>,
}

/// `dim Z - dim B` at weight `w` and cutoff `D`, with representatives.
pub fn ce_h2_weight(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32) -> Result<H2Result> {
    ce_h2_weight_with(m, w, cutoff, None)
}

/// As [`ce_h2_weight`], with the window basis listed in a seeded random
/// order instead of the lexicographic one.
pub fn ce_h2_weight_with(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32, shuffle: Option<u64>) -> Result<H2Result> {
    if w.n() != m.n() {
        return Err(Error::DimensionMismatch(format!("weight {w} for n = {}", m.n())));
    }
    let window = CutoffWindow::new(w.clone(), cutoff);
    let layout = Layout::new(m, &window, shuffle);
    if layout.pairs.is_empty() {
        return Err(Error::WindowEmpty { weight: w.0.clone(), cutoff });
    }
    let field = m.field();
    let unknowns = layout.pairs.len();
    let equations = layout.equations(m, &window);
    let mut zsys = SparseEchelon::new(field, unknowns);
    for row in &equations {
        zsys.insert(row.clone());
    }
    let z_basis = zsys.nullspace();

    let mut span = SparseEchelon::new(field, unknowns);
    for row in layout.coboundaries(m) {
        span.insert(row);
    }
    let dim_b = span.rank();
    let mut representatives = Vec::new();
    for z in &z_basis {
        let sparse = sparse_from_pairs(z.iter().cloned().enumerate());
        if span.insert(sparse) {
            let pairs = layout.pairs.iter().map(|&(p, q)| (layout.labels[p].clone(), layout.labels[q].clone())).collect();
            representatives.push(CochainMatrix { window: window.clone(), pairs, values: z.clone() });
        }
    }
    let dim_z = z_basis.len();
    assert!(dim_b <= dim_z, "coboundaries must be cocycles");
    Ok(H2Result {
        window,
        unknowns,
        equations: equations.len(),
        dim_z,
        dim_b,
        dim_h2: dim_z - dim_b,
        representatives,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub weight: Multidegree,
    pub cutoff: u32,
    pub dim_low: usize,
    pub dim_high: usize,
    pub stable: bool,
}

fn stability_with(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32) -> Result<(H2Result, StabilityReport)> {
    let low = ce_h2_weight(m, w, cutoff)?;
    let high = ce_h2_weight(m, w, cutoff + 1)?;
    let report = StabilityReport {
        weight: w.clone(),
        cutoff,
        dim_low: low.dim_h2,
        dim_high: high.dim_h2,
        stable: low.dim_h2 == high.dim_h2,
    };
    Ok((low, report))
}

/// `dim H²` at cutoffs `D` and `D + 1`.
pub fn cutoff_stability(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32) -> Result<StabilityReport> {
    stability_with(m, w, cutoff).map(|(_, r)| r)
}

/// `dim` of the Δ-invariant part of the weight-`w` component of `Ω̄¹ ⊗ V(g)`.
/// The `λ_k` are invariant, so this is `dim Ω̄¹_w` times the dimension of
/// `{v : σ_k v = ζ_{r_k}^{-w_k} v}`.
pub fn target_dim(m: &MultiloopAlgebra, w: &Multidegree) -> usize {
    omegabar_weight_dim(m.n(), w) * m.v_invariants(w).len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetVerdict {
    pub weight: Multidegree,
    pub cutoff: u32,
    pub h2_dim: usize,
    pub target_dim: usize,
    pub matches: bool,
}

/// Compare `dim H²` with the invariant target; refuses unstable weights.
pub fn compare_to_target(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32) -> Result<TargetVerdict> {
    let report = cutoff_stability(m, w, cutoff)?;
    if !report.stable {
        return Err(Error::Unstable {
            weight: w.0.clone(),
            cutoff,
            dim_low: report.dim_low,
            dim_high: report.dim_high,
        });
    }
    let target = target_dim(m, w);
    Ok(TargetVerdict {
        weight: w.clone(),
        cutoff,
        h2_dim: report.dim_low,
        target_dim: target,
        matches: report.dim_low == target,
    })
}

#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub weight: Multidegree,
    pub h2_dim: usize,
    pub target_dim: usize,
    /// One recovered `φ` per representative cocycle.
    pub phis: Vec<LinearFunctional>,
}

/// Factor every representative cocycle through `ω` at each weight.
pub fn universality_certificate(
    m: &MultiloopAlgebra,
    weights: &[Multidegree],
    cutoff: u32,
) -> Result<Vec<CertificateEntry>> {
    let mut out = BTreeMap::new();
    for w in weights {
        let (h2, report) = stability_with(m, w, cutoff)?;
        if !report.stable {
            return Err(Error::Unstable {
                weight: w.0.clone(),
                cutoff,
                dim_low: report.dim_low,
                dim_high: report.dim_high,
            });
        }
        let phis = h2
            .representatives
            .iter()
            .map(|psi| factorize(m, psi).map(|f| f.phi))
            .collect::<Result<Vec<_>>>()?;
        out.insert(
            w.clone(),
            CertificateEntry { weight: w.clone(), h2_dim: h2.dim_h2, target_dim: target_dim(m, w), phis },
        );
    }
    Ok(out.into_values().collect())
}
