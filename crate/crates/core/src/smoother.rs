//! The `n × n` smoother matrix of a trend filter.
//!
//! Interior rows carry the symmetric weights; the last `h` rows carry the
//! boundary filters for `q = h-1, ..., 0` future observations; the first `h`
//! rows are their mirror images, so `E S E = S` holds by construction.

use crate::error::{Error, Result};
use crate::filters::{
    asymmetric_lpr_filter_with_degree, mmsre_filter, AsymmetricFilter, LocalPolySpec, MmsreFamily,
    MmsreSpec, SymmetricFilter,
};
use crate::linalg::{self, Matrix};

/// How the boundary rows are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryRule {
    /// Local polynomial fit to the available points, of the given degree.
    Lpr { spec: LocalPolySpec, degree: usize },
    /// Minimum revision error filters (LC, QL or CQ).
    Mmsre(MmsreSpec),
    /// Missing observations replaced by their mirror images; yields the τ₁₁ operator.
    Reflecting,
    /// The window wraps around the series; yields the circulant operator.
    Circulant,
    /// User supplied filters, indexed by `q`.
    Custom(Vec<AsymmetricFilter>),
}

/// Which boundary rows the rule replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReplaceScope {
    #[default]
    AllBoundaryRows,
    /// Only the real-time rows (first and last); the others come from [`BoundaryFill`].
    RealtimeRowOnly,
}

/// Source of the boundary rows that [`ReplaceScope::RealtimeRowOnly`] leaves alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryFill {
    #[default]
    Reflecting,
    Circulant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolicy {
    pub rule: BoundaryRule,
    pub scope: ReplaceScope,
    pub fill: BoundaryFill,
}

impl BoundaryPolicy {
    pub fn new(rule: BoundaryRule) -> Self {
        Self {
            rule,
            scope: ReplaceScope::AllBoundaryRows,
            fill: BoundaryFill::Reflecting,
        }
    }

    /// Local polynomial boundary filters of the interior degree.
    pub fn lpr(spec: LocalPolySpec) -> Self {
        Self::new(BoundaryRule::Lpr {
            spec,
            degree: spec.degree,
        })
    }

    pub fn mmsre(spec: MmsreSpec) -> Self {
        Self::new(BoundaryRule::Mmsre(spec))
    }

    /// LC filters at the Musgrave noise ratio.
    pub fn musgrave() -> Self {
        Self::mmsre(MmsreSpec::musgrave(MmsreFamily::Lc))
    }

    pub fn reflecting() -> Self {
        Self::new(BoundaryRule::Reflecting)
    }

    pub fn circulant() -> Self {
        Self::new(BoundaryRule::Circulant)
    }

    /// Custom boundary filters, `rows[q]` for `q = 0, 1, ...`. Each row must sum
    /// to one; rows are validated, never renormalized.
    pub fn custom(h: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(q, w)| {
                if w.len() > 2 * h {
                    return Err(Error::InvalidPolicy(format!(
                        "custom row for q={q} has {} weights, more than 2h={}",
                        w.len(),
                        2 * h
                    )));
                }
                AsymmetricFilter::new(w, h, q)
                    .map_err(|e| Error::InvalidPolicy(format!("custom row for q={q}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(BoundaryRule::Custom(rows)))
    }

    pub fn realtime_only(mut self) -> Self {
        self.scope = ReplaceScope::RealtimeRowOnly;
        self
    }

    pub fn with_scope(mut self, scope: ReplaceScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_fill(mut self, fill: BoundaryFill) -> Self {
        self.fill = fill;
        self
    }

    /// The rule's boundary filter for `q` future observations, `None` for the
    /// circulant rule (whose rows wrap).
    fn rule_filter(&self, sym: &SymmetricFilter, q: usize) -> Result<Option<AsymmetricFilter>> {
        let h = sym.h();
        Ok(match &self.rule {
            BoundaryRule::Lpr { spec, degree } => {
                if spec.h() != h {
                    return Err(Error::InvalidPolicy(format!(
                        "local polynomial boundary has h={} but the filter has h={h}",
                        spec.h()
                    )));
                }
                Some(asymmetric_lpr_filter_with_degree(spec, q, *degree)?)
            }
            BoundaryRule::Mmsre(spec) => Some(mmsre_filter(sym, spec, q)?),
            BoundaryRule::Reflecting => Some(reflecting_filter(sym, q)),
            BoundaryRule::Circulant => None,
            BoundaryRule::Custom(rows) => {
                let row = rows.get(q).ok_or_else(|| {
                    Error::InvalidPolicy(format!("custom policy has no row for q={q}"))
                })?;
                if row.h() != h || row.weights().len() > 2 * h {
                    return Err(Error::InvalidPolicy(format!(
                        "custom row for q={q} does not fit bandwidth h={h}"
                    )));
                }
                Some(row.clone())
            }
        })
    }

    /// Filter used for the right-boundary row with `q` future observations;
    /// `None` when the row wraps around the series. `q = h` gives the symmetric filter.
    pub fn boundary_filter(
        &self,
        sym: &SymmetricFilter,
        q: usize,
    ) -> Result<Option<AsymmetricFilter>> {
        if q > sym.h() {
            return Err(Error::InvalidArgument(format!(
                "q={q} exceeds bandwidth h={}",
                sym.h()
            )));
        }
        if q == sym.h() {
            return Ok(Some(AsymmetricFilter::new(sym.weights().to_vec(), q, q)?));
        }
        if q == 0 || self.scope == ReplaceScope::AllBoundaryRows {
            return self.rule_filter(sym, q);
        }
        Ok(match self.fill {
            BoundaryFill::Reflecting => Some(reflecting_filter(sym, q)),
            BoundaryFill::Circulant => None,
        })
    }
}

/// Boundary filter implied by reflecting the series about its last point:
/// `y[t+q+m]` is replaced by `y[t+q+1-m]`.
pub fn reflecting_filter(sym: &SymmetricFilter, q: usize) -> AsymmetricFilter {
    let h = sym.h();
    let q = q.min(h);
    let (wp, _) = sym.split(q);
    let mut v = wp.to_vec();
    let (hi, qi) = (h as i64, q as i64);
    for m in (qi + 1)..=hi {
        let target = 2 * qi + 1 - m;
        v[(target + hi) as usize] += sym.weight(m);
    }
    AsymmetricFilter::from_parts(v, h, q)
}

/// `{w_h, w_{h-1}+w_h, ..., w_1+w_2, w_0+w_1}`.
pub fn reflecting_realtime_filter(sym: &SymmetricFilter) -> AsymmetricFilter {
    reflecting_filter(sym, 0)
}

/// Observed series; labels are opaque and the spacing is taken to be regular.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                got: labels.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "observation {} is not a finite number",
                i + 1
            )));
        }
        Ok(Self { labels, values })
    }

    /// Labels `1..=n`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let labels = (1..=values.len()).map(|t| t.to_string()).collect();
        Self::new(labels, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmootherMatrix {
    entries: Matrix,
    source: SymmetricFilter,
    policy: BoundaryPolicy,
}

impl SmootherMatrix {
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn h(&self) -> usize {
        self.source.h()
    }

    pub fn source(&self) -> &SymmetricFilter {
        &self.source
    }

    pub fn policy(&self) -> &BoundaryPolicy {
        &self.policy
    }

    /// Row `t` (0-based) as a filter over the whole series.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.entries.row(t).iter().copied().collect()
    }

    /// `max_t |Σ_j S_tj - 1|`.
    pub fn row_sum_defect(&self) -> f64 {
        row_sum_defect(&self.entries)
    }

    pub fn centrosymmetry_defect(&self) -> f64 {
        linalg::centrosymmetry_defect(&self.entries)
    }

    /// Largest absolute entry with `|t - j| > 2h`. Zero except for the circulant rule.
    pub fn band_defect(&self) -> f64 {
        let n = self.n();
        let bw = 2 * self.h();
        let mut worst = 0.0_f64;
        for t in 0..n {
            for j in 0..n {
                if t.abs_diff(j) > bw {
                    worst = worst.max(self.entries[(t, j)].abs());
                }
            }
        }
        worst
    }
}

pub(crate) fn row_sum_defect(a: &Matrix) -> f64 {
    a.row_iter()
        .map(|r| (r.sum() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Assembles `S` from the symmetric filter and the boundary policy.
pub fn build_smoother(
    sym: &SymmetricFilter,
    policy: &BoundaryPolicy,
    n: usize,
) -> Result<SmootherMatrix> {
    let h = sym.h();
    if n <= 2 * h {
        return Err(Error::Dimension { n, h });
    }
    let mut s = Matrix::zeros(n, n);
    let w = sym.weights();
    for t in h..n - h {
        for (k, &wk) in w.iter().enumerate() {
            s[(t, t - h + k)] = wk;
        }
    }

    let wrap = |s: &mut Matrix, t: usize| {
        for d in -(h as i64)..=h as i64 {
            let j = (t as i64 + d).rem_euclid(n as i64) as usize;
            s[(t, j)] = sym.weight(d);
        }
    };

    for q in 0..h {
        let t = n - 1 - q;
        match policy.boundary_filter(sym, q)? {
            Some(f) => {
                for (k, &v) in f.weights().iter().enumerate() {
                    s[(t, t - h + k)] = v;
                }
            }
            None => wrap(&mut s, t),
        }
    }
    // first rows by exchange of the last ones
    for q in 0..h {
        for j in 0..n {
            s[(q, j)] = s[(n - 1 - q, n - 1 - j)];
        }
    }
    Ok(SmootherMatrix {
        entries: s,
        source: sym.clone(),
        policy: policy.clone(),
    })
}

/// `S y`.
pub fn apply(s: &SmootherMatrix, y: &TimeSeries) -> Result<TimeSeries> {
    let values = apply_values(s.entries(), y.values())?;
    TimeSeries::new(y.labels.clone(), values)
}

pub(crate) fn apply_values(s: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != s.ncols() {
        return Err(Error::LengthMismatch {
            expected: s.ncols(),
            got: y.len(),
        });
    }
    Ok(s.row_iter()
        .map(|r| r.iter().zip(y).map(|(a, b)| a * b).sum())
        .collect())
}

/// `x_r` with coordinates `t^r`, `t = 1..=n`.
pub fn power_vector(n: usize, r: u32) -> Vec<f64> {
    (1..=n).map(|t| (t as f64).powi(r as i32)).collect()
}

/// Per-row `|(S x_r - x_r)_t|`.
pub fn reproduction_defects(s: &SmootherMatrix, r: u32) -> Vec<f64> {
    let x = power_vector(s.n(), r);
    let sx = apply_values(s.entries(), &x).expect("square matrix");
    sx.iter().zip(&x).map(|(a, b)| (a - b).abs()).collect()
}

/// `‖S x_r - x_r‖_∞`: zero iff every row reproduces degree-`r` powers.
pub fn polynomial_reproduction_residual(s: &SmootherMatrix, r: u32) -> f64 {
    reproduction_defects(s, r).into_iter().fold(0.0, f64::max)
}
