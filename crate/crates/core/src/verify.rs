//! Table reproduction and brute-force checks of the finite lemmas behind the
//! vanishing estimate.
//!
//! Every check returns [`VerificationReport`]s, one per claim. Parameters `λ`
//! are integer vectors in fundamental-weight coordinates of `h*`, so all
//! pairings `⟨λ, α∨⟩` are integers and the hypotheses reduce to exact dot
//! products.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::cartans::{adapted_cartan, AdaptedCartan, RootClass};
use crate::invariants::{n_mu_s_dim, r_g, r_g_subsystem, r_prime, theta_stable_ideals, RgOptions, Value};
use crate::linalg;
use crate::realform::{Catalog, RealForm};
use crate::rootsys::{CartanType, ParabolicSubset, RootSystem, Series};
use crate::{Error, Result, Q};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Default coefficient bound for the sweeps.
pub const DEFAULT_BOUND: i64 = 3;

/// Default number of sampled parameters per parabolic in the half-count check.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Forms swept by the estimate suite.
pub const ESTIMATE0_FORMS: [&str; 7] = [
    "complex:A2",
    "complex:A3",
    "G",
    "sl(3,R)",
    "sl(4,R)",
    "su(2,1)",
    "so(3,2)",
];

/// Forms on which the irreducible-nilradical dichotomy is swept.
pub const HALF04_FORMS: [&str; 11] = [
    "complex:A2",
    "complex:A3",
    "G",
    "sl(3,R)",
    "sl(4,R)",
    "sl(5,R)",
    "su(2,1)",
    "su(3,1)",
    "so(3,2)",
    "so(4,4)",
    "sp(4,R)",
];

/// Split forms covered by the case analysis for `A_n`, `D_n`, `E6`, `E7`.
pub const LHALF6_FORMS: [(&str, char); 8] = [
    ("sl(3,R)", 'a'),
    ("sl(4,R)", 'a'),
    ("sl(5,R)", 'a'),
    ("sl(6,R)", 'a'),
    ("so(4,4)", 'b'),
    ("so(5,5)", 'b'),
    ("E I", 'c'),
    ("E V", 'd'),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub claim_id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
    #[serde(default)]
    pub stats: BTreeMap<String, Json>,
    /// Wall-clock time; the only field that differs between identical runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(claim_id: impl Into<String>, status: Status) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            claim_id: claim_id.into(),
            status,
            witness: None,
            stats: BTreeMap::new(),
            wall_clock_ms: None,
        }
    }

    pub fn with_witness(mut self, w: Json) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn stat(mut self, key: &str, v: impl Into<Json>) -> Self {
        self.stats.insert(key.to_string(), v.into());
        self
    }

    fn timed(mut self, t: Instant) -> Self {
        self.wall_clock_ms = Some(t.elapsed().as_millis() as u64);
        self
    }

    fn from_error(claim_id: impl Into<String>, e: &Error) -> Self {
        let status = match e {
            Error::Unsupported { .. } | Error::ExceedsLimit { .. } => Status::Unsupported,
            _ => Status::Fail,
        };
        let r = Self::new(claim_id, status).stat("reason", e.to_string());
        if status == Status::Fail {
            r.with_witness(json!({ "error": e.to_string() }))
        } else {
            r
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: PathBuf::from("<report>"),
            message: e.to_string(),
        })?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Parse {
                path: PathBuf::from("<report>"),
                message: format!("unsupported report schema version {}", r.schema_version),
            });
        }
        Ok(r)
    }
}

/// Counts per status.
pub fn summarize(reports: &[VerificationReport]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::from([("pass", 0), ("fail", 0), ("unsupported", 0), ("skipped", 0)]);
    for r in reports {
        let k = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unsupported => "unsupported",
            Status::Skipped => "skipped",
        };
        *m.get_mut(k).unwrap() += 1;
    }
    m
}

fn value_json(v: Value) -> Json {
    match v {
        Value::Finite(n) => json!(n),
        Value::Infinite => json!("infinity"),
    }
}

fn ceil_half(n: u64) -> u64 {
    n.div_ceil(2)
}

fn proper_parabolics(f: &RealForm) -> Result<Vec<ParabolicSubset>> {
    let r = f.restricted_root_system()?.rank();
    Ok(ParabolicSubset::all(r)
        .into_iter()
        .filter(|s| s.is_proper(r))
        .collect())
}

// ---------------------------------------------------------------------------
// tables

/// One computed-vs-literature comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub computed: Option<Json>,
    pub paper: Option<u32>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: String,
    pub form: String,
    pub source: String,
    pub r_prime: TableCell,
    pub r_g: TableCell,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        [&self.r_prime, &self.r_g]
            .iter()
            .all(|c| c.status != Status::Fail)
    }
}

fn cell(computed: Result<Value>, paper: Option<u32>) -> TableCell {
    match (computed, paper) {
        (_, None) => TableCell {
            computed: None,
            paper: None,
            status: Status::Skipped,
            note: Some("no literature value".into()),
        },
        (Ok(v), Some(p)) => TableCell {
            computed: Some(value_json(v)),
            paper: Some(p),
            status: if v == Value::Finite(p.into()) {
                Status::Pass
            } else {
                Status::Fail
            },
            note: None,
        },
        (Err(e), Some(p)) => TableCell {
            computed: None,
            paper: Some(p),
            status: match e {
                Error::ExceedsLimit { .. } | Error::Unsupported { .. } => Status::Unsupported,
                _ => Status::Fail,
            },
            note: Some(e.to_string()),
        },
    }
}

/// Computed `r'` and `r_g` next to the literature values, for every form that
/// carries them.
pub fn table_rows(catalog: &Catalog, opts: RgOptions) -> Vec<TableRow> {
    let forms: Vec<&RealForm> = catalog.iter().filter(|f| f.literature.is_some()).collect();
    let mut rows: Vec<TableRow> = forms
        .par_iter()
        .map(|f| {
            let lit = f.literature.as_ref().expect("filtered");
            let table = lit.source.split(':').next().unwrap_or("table").to_string();
            TableRow {
                table,
                form: f.id.clone(),
                source: lit.source.clone(),
                r_prime: cell(r_prime(f).map(|v| v.value), lit.r_prime),
                r_g: cell(r_g(f, opts).map(|v| v.value), lit.r_g),
            }
        })
        .collect();
    rows.sort_by(|a, b| (&a.table, form_order(&a.form)).cmp(&(&b.table, form_order(&b.form))));
    rows
}

/// Sort key putting `E II` before `E IX` before `E V` in numeral order.
fn form_order(id: &str) -> (String, u32) {
    let numeral = |s: &str| -> Option<u32> {
        const TABLE: [&str; 9] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"];
        TABLE.iter().position(|r| *r == s).map(|i| i as u32 + 1)
    };
    match id.split_once(' ') {
        Some((head, tail)) if numeral(tail).is_some() => (head.to_string(), numeral(tail).unwrap_or(0)),
        _ => (id.to_string(), 0),
    }
}

/// One report per (form, invariant) with a literature value.
pub fn reproduce_tables(catalog: &Catalog, opts: RgOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for row in table_rows(catalog, opts) {
        for (name, c) in [("r_prime", &row.r_prime), ("r_g", &row.r_g)] {
            if c.paper.is_none() {
                continue;
            }
            let mut r = VerificationReport::new(format!("{}:{}:{name}", row.table, row.form), c.status)
                .stat("paper", c.paper)
                .stat("computed", c.computed.clone().unwrap_or(Json::Null))
                .stat("source", row.source.clone());
            if let Some(n) = &c.note {
                r = r.stat("reason", n.clone());
            }
            if c.status == Status::Fail {
                r = r.with_witness(json!({
                    "form": row.form,
                    "computed": c.computed,
                    "paper": c.paper,
                }));
            }
            out.push(r);
        }
    }
    out
}

/// `r' ≥ r_g` for every noncompact form where both values are computed.
pub fn check_observation_rprime_ge_r(catalog: &Catalog, opts: RgOptions) -> VerificationReport {
    let t = Instant::now();
    let forms: Vec<&RealForm> = catalog.iter().filter(|f| !f.is_compact()).collect();
    let results: Vec<(String, Result<(u64, u64)>)> = forms
        .par_iter()
        .map(|f| {
            let v = r_prime(f).and_then(|rp| {
                let rg = r_g(f, opts)?;
                Ok((rp.value.finite().expect("finite"), rg.value.finite().expect("noncompact")))
            });
            (f.id.clone(), v)
        })
        .collect();
    let mut compared = 0usize;
    let mut not_computed = Vec::new();
    let mut violations = Vec::new();
    for (id, v) in results {
        match v {
            Ok((rp, rg)) => {
                compared += 1;
                if rp < rg {
                    violations.push(json!({ "form": id, "r_prime": rp, "r_g": rg }));
                }
            }
            Err(e) => not_computed.push(json!({ "form": id, "reason": e.to_string() })),
        }
    }
    let status = if violations.is_empty() { Status::Pass } else { Status::Fail };
    let mut r = VerificationReport::new("observation:r_prime_ge_r_g", status)
        .stat("compared", compared)
        .stat("not_computed", Json::Array(not_computed));
    if !violations.is_empty() {
        r = r.with_witness(Json::Array(violations));
    }
    r.timed(t)
}

/// Forms exempted from `⌈r'/2⌉ ≥ r_g`: split `A_n` (n ≥ 2), `D_n` (n ≥ 4),
/// `E6`, `E7`.
pub fn is_lhalf_exception(f: &RealForm) -> bool {
    if !f.is_split() {
        return false;
    }
    let n = f.complex_type.rank();
    match f.complex_type.series() {
        Series::A => n >= 2,
        Series::D => n >= 4,
        Series::E => n == 6 || n == 7,
        _ => false,
    }
}

/// `⌈r'/2⌉ ≥ r_g` off the exception list; records how the exceptions behave.
pub fn check_lemma_lhalf(catalog: &Catalog, opts: RgOptions) -> VerificationReport {
    let t = Instant::now();
    let forms: Vec<&RealForm> = catalog.iter().filter(|f| !f.is_compact()).collect();
    let results: Vec<(&RealForm, Result<(u64, u64)>)> = forms
        .par_iter()
        .map(|f| {
            let v = r_prime(f).and_then(|rp| {
                let rg = r_g(f, opts)?;
                Ok((rp.value.finite().expect("finite"), rg.value.finite().expect("noncompact")))
            });
            (*f, v)
        })
        .collect();
    let mut checked = 0usize;
    let mut excluded = Vec::new();
    let mut not_computed = Vec::new();
    let mut violations = Vec::new();
    for (f, v) in results {
        let (rp, rg) = match v {
            Ok(x) => x,
            Err(e) => {
                not_computed.push(json!({ "form": f.id, "reason": e.to_string() }));
                continue;
            }
        };
        let holds = ceil_half(rp) >= rg;
        if is_lhalf_exception(f) {
            excluded.push(json!({ "form": f.id, "r_prime": rp, "r_g": rg, "inequality_holds": holds }));
        } else {
            checked += 1;
            if !holds {
                violations.push(json!({ "form": f.id, "ceil_half_r_prime": ceil_half(rp), "r_g": rg }));
            }
        }
    }
    let status = if violations.is_empty() { Status::Pass } else { Status::Fail };
    let mut r = VerificationReport::new("lemma_lhalf:catalog", status)
        .stat("checked", checked)
        .stat("excluded", Json::Array(excluded))
        .stat("not_computed", Json::Array(not_computed));
    if !violations.is_empty() {
        r = r.with_witness(Json::Array(violations));
    }
    r.timed(t)
}

// ---------------------------------------------------------------------------
// interval property of ρ_l on nilradical levels

/// For each grade of `Δ(n)`, the values `⟨ρ_l, α∨⟩` form `b_0 + {0, …, c_0}`.
pub fn check_interval_lemma(ty: CartanType, s: &ParabolicSubset) -> VerificationReport {
    let claim = format!("interval:{ty}:S={s}");
    let sys = RootSystem::new(ty);
    let gram = sys.gram();
    let (levi, nil) = sys.parabolic_split(s);
    let mut rho_l = vec![Q::zero(); sys.rank()];
    for &i in levi.iter().filter(|&&i| sys.is_positive(i)) {
        for (r, &c) in rho_l.iter_mut().zip(sys.root(i)) {
            *r += Q::new(c, 2);
        }
    }
    let mut levels: BTreeMap<Vec<i64>, BTreeSet<Q>> = BTreeMap::new();
    for &i in &nil {
        // levels of the dual nilradical: coroot coefficients outside S
        let a = sys.root(i);
        let co = sys.coroot(i);
        let grade: Vec<i64> = (0..sys.rank()).filter(|j| !s.contains(*j)).map(|j| co[j]).collect();
        let v = linalg::form(gram, &rho_l, &linalg::to_q(a)) / sys.half_norm(i);
        levels.entry(grade).or_default().insert(v);
    }
    let mut detail = Vec::new();
    let mut bad = None;
    for (grade, values) in &levels {
        let vals: Vec<Q> = values.iter().copied().collect();
        let b0 = vals[0];
        let contiguous = vals.windows(2).all(|w| w[1] - w[0] == Q::from(1));
        let half_integral = (b0 * Q::from(2)).is_integer();
        let strs: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        detail.push(json!({
            "grade": grade,
            "values": strs,
            "b0": b0.to_string(),
            "c0": vals.len() - 1,
        }));
        if (!contiguous || !half_integral) && bad.is_none() {
            bad = Some(json!({ "grade": grade, "values": strs }));
        }
    }
    let status = if bad.is_none() { Status::Pass } else { Status::Fail };
    let mut r = VerificationReport::new(claim, status)
        .stat("levels", Json::Array(detail))
        .stat("dim_n", nil.len());
    if let Some(w) = bad {
        r = r.with_witness(w);
    }
    r
}

/// Complex simple types of rank at most `max_rank` (one per isomorphism class).
pub fn simple_types_up_to(max_rank: usize) -> Vec<CartanType> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push(CartanType::new(Series::A, n).expect("valid"));
    }
    for n in 2..=max_rank {
        out.push(CartanType::new(Series::B, n).expect("valid"));
    }
    for n in 3..=max_rank {
        out.push(CartanType::new(Series::C, n).expect("valid"));
    }
    for n in 4..=max_rank {
        out.push(CartanType::new(Series::D, n).expect("valid"));
    }
    for (series, n) in [(Series::E, 6), (Series::E, 7), (Series::E, 8), (Series::F, 4), (Series::G, 2)] {
        if n <= max_rank {
            out.push(CartanType::new(series, n).expect("valid"));
        }
    }
    out
}

/// The interval check on every maximal parabolic of every simple type of
/// rank at most `max_rank`.
pub fn interval_suite(max_rank: usize) -> Vec<VerificationReport> {
    let mut jobs = Vec::new();
    for ty in simple_types_up_to(max_rank) {
        let n = ty.rank();
        for drop in 0..n {
            jobs.push((ty, ParabolicSubset::new((0..n).filter(|&j| j != drop))));
        }
    }
    jobs.par_iter().map(|(ty, s)| check_interval_lemma(*ty, s)).collect()
}

// ---------------------------------------------------------------------------
// parameters on an adapted Cartan

/// Integral weights `λ` on an adapted Cartan and the hypotheses on them.
struct LambdaSpace<'a> {
    sys: &'a RootSystem,
    ac: &'a AdaptedCartan,
    /// `(λ, v) = row · k` for each basis vector `v` of `a'`.
    a_prime_rows: Vec<Vec<Q>>,
    /// Positive multiples of `⟨λ|_a, α∨⟩` as `row · k`, one per distinct
    /// `a`-weight of `Δ(n)`.
    a_rows: Vec<Vec<i64>>,
}

/// Smallest integer vector on the ray of `v`.
fn primitive(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |l, x| num_integer::lcm(l, *x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (*x * Q::from(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)).max(1);
    ints.into_iter().map(|x| x / g).collect()
}

fn idot(row: &[i64], k: &[i64]) -> i128 {
    row.iter().zip(k).map(|(&a, &b)| a as i128 * b as i128).sum()
}

impl<'a> LambdaSpace<'a> {
    fn new(sys: &'a RootSystem, ac: &'a AdaptedCartan) -> Self {
        let n = sys.rank();
        let gram = sys.gram();
        let hn: Vec<Q> = (0..n).map(|i| sys.half_norm(sys.simple_index(i))).collect();
        let row = |v: &[Q]| -> Vec<Q> { (0..n).map(|i| v[i] * hn[i]).collect() };
        let a_prime_rows = ac.a_prime.iter().map(|v| row(v)).collect();
        let proj = linalg::Projector::new(gram, &ac.a);
        let mut seen = HashSet::new();
        let mut a_rows = Vec::new();
        for &i in &ac.nilradical {
            let p = proj.apply(&linalg::to_q(sys.root(i)));
            let r = primitive(&row(&p));
            if seen.insert(r.clone()) {
                a_rows.push(r);
            }
        }
        Self {
            sys,
            ac,
            a_prime_rows,
            a_rows,
        }
    }

    fn vanishes_on_a_prime(&self, k: &[i64]) -> bool {
        self.a_prime_rows
            .iter()
            .all(|r| r.iter().zip(k).map(|(a, &b)| *a * Q::from(b)).sum::<Q>().is_zero())
    }

    fn a_dominant(&self, k: &[i64]) -> bool {
        self.a_rows.iter().all(|r| idot(r, k) >= 0)
    }

    /// Integer weight of `2ρ_n` projected to `a`: vanishes on `a'` and is
    /// strictly positive on every `a`-weight of `Δ(n)`.
    fn dominant_shift(&self) -> Vec<i64> {
        let n = self.sys.rank();
        let mut sum = vec![Q::zero(); n];
        for &i in &self.ac.nilradical {
            for (x, &c) in sum.iter_mut().zip(self.sys.root(i)) {
                *x += Q::from(c);
            }
        }
        let p = linalg::project(self.sys.gram(), &self.ac.a, &sum);
        primitive(&self.sys.weight_of(&p).coords)
    }

    /// Least `t ≥ 0` with `k + t·shift` a-dominant.
    fn shift_needed(&self, k: &[i64], shift: &[i64]) -> Option<i64> {
        let mut t = 0i128;
        for r in &self.a_rows {
            let (a, b) = (idot(r, k), idot(r, shift));
            if a < 0 {
                if b <= 0 {
                    return None;
                }
                t = t.max((-a + b - 1) / b);
            }
        }
        i64::try_from(t).ok()
    }

    /// `⟨λ, α∨⟩` for every root, or `None` if `λ` is singular.
    fn pairings(&self, k: &[i64]) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.sys.len());
        for i in 0..self.sys.len() {
            let p: i64 = self.sys.coroot(i).iter().zip(k).map(|(a, b)| a * b).sum();
            if p == 0 {
                return None;
            }
            out.push(p);
        }
        Some(out)
    }

    fn count_positive(&self, pairings: &[i64]) -> u64 {
        self.ac.nilradical.iter().filter(|&&i| pairings[i] > 0).count() as u64
    }

    /// `r_{m, λ|c'}`: uses `⟨λ, α∨⟩` on the Levi roots directly, valid since
    /// `λ` vanishes on `a'` and Levi roots vanish on `c ⊕ a`.
    fn r_m_lambda(&self, pairings: &[i64]) -> Result<u64> {
        let p: Vec<Q> = self.ac.levi.iter().map(|&i| Q::from(pairings[i])).collect();
        n_mu_s_dim(self.sys, &self.ac.base, &self.ac.levi, &p)
    }

    /// Visits every admissible `λ` with coordinates in `[-B, B] \ {0}`.
    fn sweep(&self, bound: i64, mut visit: impl FnMut(&[i64], &[i64]) -> Result<()>) -> Result<SweepCounts> {
        let n = self.sys.rank();
        let values: Vec<i64> = (-bound..=bound).filter(|&v| v != 0).collect();
        let mut idx = vec![0usize; n];
        let mut counts = SweepCounts::default();
        if values.is_empty() {
            return Ok(counts);
        }
        loop {
            let k: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
            counts.box_points += 1;
            if self.vanishes_on_a_prime(&k) && self.a_dominant(&k) {
                counts.hypotheses += 1;
                match self.pairings(&k) {
                    Some(p) => {
                        counts.admissible += 1;
                        visit(&k, &p)?;
                    }
                    None => counts.singular += 1,
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(counts);
                }
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Cap on chambers counted per sweep before giving up on the comparison.
pub const CHAMBER_COUNT_LIMIT: u64 = 20_000;

/// One interior integer point per chamber of the coroot hyperplane
/// arrangement inside the admissible region (`λ|a' = 0`, `λ|a` dominant),
/// by sign-vector search with exact feasibility tests. `None` past
/// [`CHAMBER_COUNT_LIMIT`].
fn arrangement_chambers(space: &LambdaSpace) -> Option<Vec<Vec<i64>>> {
    use crate::fm::{feasible_point, Constraint, Rel};
    let sys = space.sys;
    let n = sys.rank();
    let mut base: Vec<Constraint> = space
        .a_prime_rows
        .iter()
        .map(|r| Constraint::new(r.clone(), Rel::Eq, Q::zero()))
        .collect();
    base.extend(
        space
            .a_rows
            .iter()
            .map(|r| Constraint::new(linalg::to_q(r), Rel::Ge, Q::zero())),
    );
    let mut seen = HashSet::new();
    let planes: Vec<Vec<Q>> = sys
        .positive_indices()
        .map(|i| primitive(&linalg::to_q(sys.coroot(i))))
        .filter(|v| seen.insert(v.clone()))
        .map(|v| linalg::to_q(&v))
        .collect();
    fn walk(
        planes: &[Vec<Q>],
        depth: usize,
        cs: &mut Vec<Constraint>,
        point: Vec<Q>,
        out: &mut Vec<Vec<i64>>,
    ) -> bool {
        if depth == planes.len() {
            out.push(primitive(&point));
            return out.len() as u64 <= CHAMBER_COUNT_LIMIT;
        }
        let at: Q = planes[depth].iter().zip(&point).map(|(a, b)| *a * *b).sum();
        for sign in [1i64, -1] {
            let coeffs: Vec<Q> = planes[depth].iter().map(|x| *x * Q::from(sign)).collect();
            cs.push(Constraint::new(coeffs, Rel::Gt, Q::zero()));
            // the current witness already decides one side
            let next = if at * Q::from(sign) > Q::zero() {
                Some(point.clone())
            } else {
                feasible_point(point.len(), cs)
            };
            let ok = match next {
                Some(p) => walk(planes, depth + 1, cs, p, out),
                None => true,
            };
            cs.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let Some(start) = feasible_point(n, &base) else {
        return Some(Vec::new());
    };
    let mut out = Vec::new();
    walk(&planes, 0, &mut base, start, &mut out).then_some(out)
}

#[derive(Debug, Default, Clone, Copy)]
struct SweepCounts {
    box_points: u64,
    hypotheses: u64,
    singular: u64,
    admissible: u64,
}

impl SweepCounts {
    fn add_to(self, r: VerificationReport) -> VerificationReport {
        r.stat("box_points", self.box_points)
            .stat("hypotheses_hold", self.hypotheses)
            .stat("singular", self.singular)
            .stat("admissible", self.admissible)
    }
}

fn is_compact_or_zero(ac: &AdaptedCartan) -> bool {
    ac.levi
        .iter()
        .all(|&i| ac.base.class(i) == RootClass::CompactImaginary)
}

fn dims_json(ac: &AdaptedCartan) -> Json {
    let (c, a, cp, ap) = ac.dims();
    json!({ "c": c, "a": a, "c_prime": cp, "a_prime": ap })
}

fn seed_for(claim: &str) -> u64 {
    // FNV-1a; stable across platforms and toolchains
    claim
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Integer vectors spanning a full-rank sublattice of `{k : row · k = 0}`.
fn integer_kernel(rows: &[Vec<Q>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    linalg::nullspace(rows, n).iter().map(|v| primitive(v)).collect()
}

// ---------------------------------------------------------------------------
// half-count lemma

/// `−θΔ(n) = Δ(n)`, then `#{α ∈ Δ(n) : ⟨λ, α∨⟩ > 0} ≥ ⌈|Δ(n)|/2⌉` on
/// `samples` random admissible `λ`.
pub fn check_lemma_half(f: &RealForm, s: &ParabolicSubset, samples: usize) -> VerificationReport {
    let t = Instant::now();
    let claim = format!("lemma_half:{}:S={s}", f.id);
    let ac = match adapted_cartan(f, s) {
        Ok(ac) => ac,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let sys = &f.system;
    let nil: HashSet<usize> = ac.nilradical.iter().copied().collect();
    if let Some(&bad) = ac
        .nilradical
        .iter()
        .find(|&&i| !nil.contains(&sys.negative(ac.base.theta_root(i))))
    {
        return VerificationReport::new(claim, Status::Fail)
            .with_witness(json!({
                "property": "-theta(n) = n",
                "root": sys.root(bad),
            }))
            .timed(t);
    }
    let space = LambdaSpace::new(sys, &ac);
    let basis = integer_kernel(&space.a_prime_rows, sys.rank());
    let dim_n = ac.nilradical.len() as u64;
    let need = ceil_half(dim_n);
    let shift = space.dominant_shift();
    let mut rng = StdRng::seed_from_u64(seed_for(&claim));
    let max_attempts = 20 * samples as u64;
    let (mut attempts, mut accepted, mut shifted) = (0u64, 0usize, 0u64);
    let mut min_count = u64::MAX;
    let mut violation = None;
    while accepted < samples && attempts < max_attempts {
        attempts += 1;
        let mut k = vec![0i64; sys.rank()];
        for b in &basis {
            let c: i64 = rng.gen_range(-1000..=1000);
            for (x, y) in k.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        if !space.a_dominant(&k) {
            // push along 2ρ_n until the a-part is dominant, plus a random overshoot
            let Some(t) = space.shift_needed(&k, &shift) else { continue };
            let t = t + rng.gen_range(0..=1000 / shift.iter().map(|x| x.abs()).max().unwrap_or(1).max(1));
            for (x, y) in k.iter_mut().zip(&shift) {
                *x += t * y;
            }
            shifted += 1;
        }
        let Some(p) = space.pairings(&k) else { continue };
        accepted += 1;
        let count = space.count_positive(&p);
        min_count = min_count.min(count);
        if count < need && violation.is_none() {
            violation = Some(json!({ "lambda": k, "count": count, "required": need }));
        }
    }
    let status = if violation.is_some() { Status::Fail } else { Status::Pass };
    let mut r = VerificationReport::new(claim, status)
        .stat("dim_n", dim_n)
        .stat("required", need)
        .stat("samples", accepted)
        .stat("attempts", attempts)
        .stat("shifted", shifted)
        .stat("min_count", if accepted > 0 { json!(min_count) } else { Json::Null })
        .stat("dims", dims_json(&ac));
    if let Some(w) = violation {
        r = r.with_witness(w);
    }
    r.timed(t)
}

// ---------------------------------------------------------------------------
// the estimate and the dichotomy

/// Everything needed to replay one parameter of the estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateTerms {
    pub count: u64,
    pub r_m_lambda: u64,
    pub r_g: u64,
}

/// Evaluates both sides of the estimate for one `λ` (weight coordinates),
/// checking its hypotheses.
pub fn estimate_terms(f: &RealForm, s: &ParabolicSubset, lambda: &[i64]) -> Result<EstimateTerms> {
    let ac = adapted_cartan(f, s)?;
    let space = LambdaSpace::new(&f.system, &ac);
    if lambda.len() != f.system.rank() {
        return Err(Error::Dimension {
            expected: f.system.rank(),
            got: lambda.len(),
        });
    }
    if !space.vanishes_on_a_prime(lambda) {
        return Err(Error::Precondition("λ does not vanish on a'".into()));
    }
    if !space.a_dominant(lambda) {
        return Err(Error::Precondition("λ|a is not dominant on Δ(n)".into()));
    }
    let p = space
        .pairings(lambda)
        .ok_or_else(|| Error::Precondition("λ is singular".into()))?;
    let rg = r_g(f, RgOptions::deep())?
        .value
        .finite()
        .ok_or_else(|| Error::Precondition("compact form".into()))?;
    Ok(EstimateTerms {
        count: space.count_positive(&p),
        r_m_lambda: space.r_m_lambda(&p)?,
        r_g: rg,
    })
}

/// `count + r_{m,λ|c'} ≥ r_g` for every admissible `λ` in the box of radius
/// `bound`.
///
/// `r_{m,λ|c'}` is taken literally, so it is 0 when `m` is compact or zero;
/// this is a stronger assertion than treating it as `+∞` there.
pub fn estimate0_sweep(f: &RealForm, s: &ParabolicSubset, bound: i64) -> VerificationReport {
    let t = Instant::now();
    let claim = format!("estimate0:{}:S={s}:B={bound}", f.id);
    let ac = match adapted_cartan(f, s) {
        Ok(ac) => ac,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let rg = match r_g(f, RgOptions::deep()) {
        Ok(v) => match v.value {
            Value::Finite(x) => x,
            Value::Infinite => {
                return VerificationReport::new(claim, Status::Skipped)
                    .stat("reason", "compact form")
                    .timed(t)
            }
        },
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let space = LambdaSpace::new(&f.system, &ac);
    let positive: Vec<usize> = f.system.positive_indices().collect();
    let mut min_slack = i64::MAX;
    let mut violations = 0u64;
    let mut first = None;
    let mut tightest = None;
    let mut patterns: HashSet<Vec<bool>> = HashSet::new();
    let mut outcomes: BTreeSet<(u64, u64)> = BTreeSet::new();
    let counts = space.sweep(bound, |k, p| {
        let count = space.count_positive(p);
        let rm = space.r_m_lambda(p)?;
        let slack = (count + rm) as i64 - rg as i64;
        if slack < min_slack {
            min_slack = slack;
            tightest = Some(json!({
                "kind": "tightest",
                "lambda": k,
                "count": count,
                "r_m_lambda": rm,
                "r_g": rg,
            }));
        }
        patterns.insert(positive.iter().map(|&i| p[i] > 0).collect());
        outcomes.insert((count, rm));
        if slack < 0 {
            violations += 1;
            if first.is_none() {
                first = Some(json!({
                    "kind": "violation",
                    "lambda": k,
                    "count": count,
                    "r_m_lambda": rm,
                    "r_g": rg,
                }));
            }
        }
        Ok(())
    });
    let counts = match counts {
        Ok(c) => c,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    // the box can miss narrow chambers, so each chamber is also sampled
    let chambers = arrangement_chambers(&space);
    let mut chamber_points = 0u64;
    let mut chamber_violations = 0u64;
    for base in chambers.iter().flatten() {
        for mult in 1..=3 {
            let k: Vec<i64> = base.iter().map(|x| x * mult).collect();
            let Some(p) = space.pairings(&k) else { continue };
            chamber_points += 1;
            let count = space.count_positive(&p);
            let rm = match space.r_m_lambda(&p) {
                Ok(v) => v,
                Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
            };
            if count + rm < rg {
                chamber_violations += 1;
                if first.is_none() {
                    first = Some(json!({
                        "kind": "violation",
                        "lambda": k,
                        "count": count,
                        "r_m_lambda": rm,
                        "r_g": rg,
                    }));
                }
            }
        }
    }
    let violations = violations + chamber_violations;
    let status = if violations == 0 { Status::Pass } else { Status::Fail };
    let outcome_list: Vec<Json> = outcomes.iter().map(|(c, m)| json!([c, m])).collect();
    let mut r = counts
        .add_to(VerificationReport::new(claim, status))
        .stat("r_g", rg)
        .stat("dim_n", ac.nilradical.len())
        .stat("dims", dims_json(&ac))
        .stat("m_compact_or_zero", is_compact_or_zero(&ac))
        .stat("violations", violations)
        .stat("min_slack", if counts.admissible > 0 { json!(min_slack) } else { Json::Null })
        .stat("distinct_sign_patterns", patterns.len())
        .stat("arrangement_chambers", chambers.as_ref().map_or(Json::Null, |c| json!(c.len())))
        .stat("box_hits_every_chamber", chambers.as_ref().map_or(Json::Null, |c| json!(c.len() == patterns.len())))
        .stat("chamber_points", chamber_points)
        .stat("chamber_violations", chamber_violations)
        .stat("outcomes_count_r_m", Json::Array(outcome_list));
    // a failure shows its first violation, a pass its tightest λ
    if let Some(w) = first.or(tightest) {
        r = r.with_witness(w);
    }
    r.timed(t)
}

/// Number of distinct weights of the center `c ⊕ a` of the Levi on the
/// coroots of `Δ(n)`. The dual nilradical is irreducible under the dual
/// Levi exactly when this is 1.
fn dual_center_weights(sys: &RootSystem, ac: &AdaptedCartan) -> usize {
    let center: Vec<Vec<Q>> = ac.c.iter().chain(&ac.a).cloned().collect();
    let proj = linalg::Projector::new(sys.gram(), &center);
    let mut seen = HashSet::new();
    for &i in &ac.nilradical {
        let p = proj.apply(&linalg::to_q(sys.root(i)));
        let h = sys.half_norm(i);
        seen.insert(p.into_iter().map(|x| x / h).collect::<Vec<Q>>());
    }
    seen.len()
}

/// The dichotomy for an irreducible nilradical: all of `Δ(n)` positive, or
/// `r_{m,λ|c'} ≥ r_m`.
pub fn check_lemma_half04(f: &RealForm, s: &ParabolicSubset, bound: i64) -> VerificationReport {
    let t = Instant::now();
    let claim = format!("lemma_half04:{}:S={s}:B={bound}", f.id);
    let ac = match adapted_cartan(f, s) {
        Ok(ac) => ac,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let unsupported = |reason: String| {
        VerificationReport::new(claim.clone(), Status::Unsupported)
            .stat("reason", reason)
            .timed(t)
    };
    let weights = dual_center_weights(&f.system, &ac);
    if weights != 1 {
        return unsupported(format!(
            "dual nilradical splits into {weights} center weights, not irreducible"
        ));
    }
    if ac.levi.is_empty() {
        return unsupported("m is zero".into());
    }
    let sys = &f.system;
    let ideals = theta_stable_ideals(sys, &ac.base, &ac.levi);
    if ideals
        .iter()
        .any(|id| id.iter().all(|&i| ac.base.class(i) == RootClass::CompactImaginary))
    {
        return unsupported("m has a compact simple ideal".into());
    }
    let r_m = match r_g_subsystem(sys, &ac.base, &ac.levi) {
        Ok(v) => v.value.finite().expect("noncompact m"),
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let space = LambdaSpace::new(sys, &ac);
    let dim_n = ac.nilradical.len() as u64;
    let (mut all_positive, mut bounded, mut both, mut violations) = (0u64, 0u64, 0u64, 0u64);
    let mut first = None;
    let counts = space.sweep(bound, |k, p| {
        let count = space.count_positive(p);
        let rm = space.r_m_lambda(p)?;
        let b1 = count == dim_n;
        let b2 = rm >= r_m;
        match (b1, b2) {
            (true, true) => both += 1,
            (true, false) => all_positive += 1,
            (false, true) => bounded += 1,
            (false, false) => {
                violations += 1;
                if first.is_none() {
                    first = Some(json!({
                        "kind": "violation",
                        "lambda": k,
                        "count": count,
                        "dim_n": dim_n,
                        "r_m_lambda": rm,
                        "r_m": r_m,
                    }));
                }
            }
        }
        Ok(())
    });
    let counts = match counts {
        Ok(c) => c,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let status = if violations == 0 { Status::Pass } else { Status::Fail };
    let mut r = counts
        .add_to(VerificationReport::new(claim, status))
        .stat("dim_n", dim_n)
        .stat("r_m", r_m)
        .stat("branch_all_positive_only", all_positive)
        .stat("branch_r_m_only", bounded)
        .stat("branch_both", both)
        .stat("violations", violations);
    if let Some(w) = first {
        r = r.with_witness(w);
    }
    r.timed(t)
}

// ---------------------------------------------------------------------------
// case analysis for split A_n, D_n, E6, E7

/// Simple types of the connected components of the sub-diagram on `s`,
/// for simply laced diagrams. `None` if a component is not simply laced.
pub fn subdiagram_types(cartan: &[Vec<i64>], s: &ParabolicSubset) -> Option<Vec<CartanType>> {
    let nodes: Vec<usize> = s.levi.iter().copied().collect();
    let adj = |i: usize, j: usize| i != j && cartan[i][j] != 0;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &nodes {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &nodes {
                if adj(x, y) && seen.insert(y) {
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        for &x in &comp {
            for &y in &comp {
                if x != y && !(cartan[x][y] == 0 || cartan[x][y] == -1) {
                    return None;
                }
            }
        }
        let degree = |x: usize| comp.iter().filter(|&&y| adj(x, y)).count();
        let n = comp.len();
        let branches: Vec<usize> = comp.iter().copied().filter(|&x| degree(x) == 3).collect();
        let ty = match branches.as_slice() {
            [] => CartanType::new(Series::A, n).ok()?,
            [b] => {
                let mut arms: Vec<usize> = comp
                    .iter()
                    .copied()
                    .filter(|&y| adj(*b, y))
                    .map(|y| {
                        // walk away from the branch node
                        let (mut prev, mut cur, mut len) = (*b, y, 1);
                        loop {
                            let next = comp.iter().copied().find(|&z| z != prev && adj(cur, z));
                            match next {
                                Some(z) => {
                                    prev = cur;
                                    cur = z;
                                    len += 1;
                                }
                                None => break len,
                            }
                        }
                    })
                    .collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, c] => CartanType::new(Series::D, c + 3).ok()?,
                    [1, 2, 2] => CartanType::new(Series::E, 6).ok()?,
                    [1, 2, 3] => CartanType::new(Series::E, 7).ok()?,
                    [1, 2, 4] => CartanType::new(Series::E, 8).ok()?,
                    _ => return None,
                }
            }
            _ => return None,
        };
        out.push(ty);
    }
    out.sort();
    Some(out)
}

fn split_form_of(catalog: &Catalog, ty: CartanType) -> Option<&RealForm> {
    catalog
        .iter()
        .find(|f| f.is_split() && f.complex_type == ty)
}

fn fmt_types(types: &[CartanType]) -> String {
    if types.is_empty() {
        return "0".into();
    }
    types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("+")
}

/// True if the case statement for `case` adds `r_m` for a Levi of these types.
fn adds_r_m(case: char, rank: usize, levi_len: usize, types: &[CartanType]) -> bool {
    let single = |series: Series, n: usize| {
        types.len() == 1 && types[0].series() == series && types[0].rank() == n
    };
    match case {
        'a' => levi_len + 1 == rank,
        // m ≅ so(n-1,n-1) (D_{n-1}, which is A3 for n = 4) or sl_n(R) (A_{n-1})
        'b' => {
            let n = rank;
            single(Series::D, n - 1) || (n == 4 && single(Series::A, 3)) || single(Series::A, n - 1)
        }
        'c' => single(Series::D, 5),
        'd' => single(Series::E, 6),
        _ => false,
    }
}

/// Every standard parabolic of a split form against the matching case
/// statement of the `A_n`/`D_n`/`E6`/`E7` analysis.
pub fn check_lemma_lhalf6(catalog: &Catalog, id: &str, case: char) -> VerificationReport {
    let t = Instant::now();
    let claim = format!("lemma_lhalf6:{id}");
    let f = match catalog.get(id) {
        Ok(f) => f,
        Err(e) => {
            return VerificationReport::new(claim, Status::Skipped)
                .stat("reason", e.to_string())
                .timed(t)
        }
    };
    let rs = match f.restricted_root_system() {
        Ok(rs) => rs,
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    // split E7 is past the default rank limit; its search takes about a second
    let rg = match r_g(f, RgOptions::deep()) {
        Ok(v) => v.value.finite().expect("noncompact"),
        Err(e) => return VerificationReport::from_error(claim, &e).timed(t),
    };
    let rank = rs.rank();
    let mut r_cache: BTreeMap<CartanType, Option<u64>> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut unsupported = Vec::new();
    let mut needs_r_m = 0usize;
    for s in ParabolicSubset::all(rank).into_iter().filter(|s| s.is_proper(rank)) {
        let dim_n = rs.nilradical_dim(&s) as u64;
        let half = ceil_half(dim_n);
        let Some(types) = subdiagram_types(rs.reduced.cartan(), &s) else {
            unsupported.push(json!({ "S": s.to_string(), "reason": "Levi not simply laced" }));
            continue;
        };
        let second = adds_r_m(case, rank, s.levi.len(), &types);
        let lhs = if second {
            let mut best: Option<u64> = None;
            for ty in &types {
                let v = *r_cache.entry(*ty).or_insert_with(|| {
                    split_form_of(catalog, *ty)
                        .and_then(|g| r_g(g, RgOptions::deep()).ok())
                        .and_then(|v| v.value.finite())
                });
                match v {
                    Some(v) => best = Some(best.map_or(v, |b: u64| b.min(v))),
                    None => {
                        best = None;
                        break;
                    }
                }
            }
            match best {
                Some(r_m) => {
                    if half < rg {
                        needs_r_m += 1;
                    }
                    half + r_m
                }
                None => {
                    unsupported.push(json!({
                        "S": s.to_string(),
                        "reason": format!("no split form of type {} in the catalog", fmt_types(&types)),
                    }));
                    continue;
                }
            }
        } else {
            half
        };
        rows.push(json!({
            "S": s.to_string(),
            "levi": fmt_types(&types),
            "dim_n": dim_n,
            "adds_r_m": second,
            "lhs": lhs,
        }));
        if lhs < rg {
            violations.push(json!({
                "S": s.to_string(),
                "levi": fmt_types(&types),
                "dim_n": dim_n,
                "lhs": lhs,
                "r_g": rg,
            }));
        }
    }
    let status = if !violations.is_empty() {
        Status::Fail
    } else if !unsupported.is_empty() {
        Status::Unsupported
    } else {
        Status::Pass
    };
    let mut r = VerificationReport::new(claim, status)
        .stat("case", case.to_string())
        .stat("r_g", rg)
        .stat("parabolics", rows.len())
        .stat("cases_needing_r_m", needs_r_m)
        .stat("rows", Json::Array(rows));
    if !unsupported.is_empty() {
        r = r.stat("unsupported", Json::Array(unsupported));
    }
    if !violations.is_empty() {
        r = r.with_witness(Json::Array(violations));
    }
    r.timed(t)
}

// ---------------------------------------------------------------------------
// suites

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Tables,
    Lemmas,
    Estimate0,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tables" => Ok(Suite::Tables),
            "lemmas" => Ok(Suite::Lemmas),
            "estimate0" => Ok(Suite::Estimate0),
            "all" => Ok(Suite::All),
            _ => Err(Error::Precondition(format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub rg: RgOptions,
    pub bound: i64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            rg: RgOptions::default(),
            bound: DEFAULT_BOUND,
            samples: DEFAULT_SAMPLES,
        }
    }
}

fn pairs<'c>(catalog: &'c Catalog, ids: Option<&[&str]>) -> Vec<(&'c RealForm, ParabolicSubset)> {
    let forms: Vec<&RealForm> = match ids {
        Some(ids) => ids.iter().filter_map(|id| catalog.get(id).ok()).collect(),
        None => catalog.iter().filter(|f| !f.is_compact()).collect(),
    };
    forms
        .into_iter()
        .flat_map(|f| {
            proper_parabolics(f)
                .unwrap_or_default()
                .into_iter()
                .map(move |s| (f, s))
        })
        .collect()
}

fn missing(catalog: &Catalog, ids: &[&str], suite: &str) -> Vec<VerificationReport> {
    ids.iter()
        .filter(|id| catalog.get(id).is_err())
        .map(|id| {
            VerificationReport::new(format!("{suite}:{id}"), Status::Skipped)
                .stat("reason", format!("form `{id}` is not in the catalog"))
        })
        .collect()
}

/// Half-count check over every (noncompact form, proper parabolic) pair.
pub fn lemma_half_suite(catalog: &Catalog, samples: usize) -> Vec<VerificationReport> {
    pairs(catalog, None)
        .par_iter()
        .map(|(f, s)| check_lemma_half(f, s, samples))
        .collect()
}

pub fn half04_suite(catalog: &Catalog, bound: i64) -> Vec<VerificationReport> {
    let mut out = missing(catalog, &HALF04_FORMS, "lemma_half04");
    out.extend(
        pairs(catalog, Some(&HALF04_FORMS))
            .par_iter()
            .map(|(f, s)| check_lemma_half04(f, s, bound))
            .collect::<Vec<_>>(),
    );
    out
}

pub fn lhalf6_suite(catalog: &Catalog) -> Vec<VerificationReport> {
    LHALF6_FORMS
        .par_iter()
        .map(|(id, case)| check_lemma_lhalf6(catalog, id, *case))
        .collect()
}

pub fn estimate0_suite(catalog: &Catalog, bound: i64) -> Vec<VerificationReport> {
    let mut out = missing(catalog, &ESTIMATE0_FORMS, "estimate0");
    out.extend(
        pairs(catalog, Some(&ESTIMATE0_FORMS))
            .par_iter()
            .map(|(f, s)| estimate0_sweep(f, s, bound))
            .collect::<Vec<_>>(),
    );
    out
}

/// Runs the selected suites; the report order is fixed.
pub fn run_suite(catalog: &Catalog, suite: Suite, opts: SuiteOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    run_suite_streaming(catalog, suite, opts, |batch| out.extend_from_slice(batch));
    out
}

/// As [`run_suite`], handing each finished batch to `emit` in order.
pub fn run_suite_streaming(
    catalog: &Catalog,
    suite: Suite,
    opts: SuiteOptions,
    mut emit: impl FnMut(&[VerificationReport]),
) {
    if matches!(suite, Suite::Tables | Suite::All) {
        emit(&reproduce_tables(catalog, opts.rg));
        emit(&[check_observation_rprime_ge_r(catalog, opts.rg)]);
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        emit(&lemma_half_suite(catalog, opts.samples));
        emit(&[check_lemma_lhalf(catalog, opts.rg)]);
        emit(&interval_suite(6));
        emit(&half04_suite(catalog, opts.bound));
        emit(&lhalf6_suite(catalog));
    }
    if matches!(suite, Suite::Estimate0 | Suite::All) {
        emit(&estimate0_suite(catalog, opts.bound));
    }
}

/// The `lambda` of a report witness, for replay through [`estimate_terms`].
pub fn witness_lambda(r: &VerificationReport) -> Option<Vec<i64>> {
    let w = r.witness.as_ref()?;
    let arr = w.get("lambda")?.as_array()?;
    arr.iter().map(|x| x.as_i64()).collect()
}

/// Parses `S={1,3}` style suffixes back into a parabolic.
pub fn parse_parabolic(s: &str) -> Result<ParabolicSubset> {
    let inner = s
        .trim()
        .trim_start_matches("S=")
        .trim_start_matches('{')
        .trim_end_matches('}');
    if inner.trim().is_empty() {
        return Ok(ParabolicSubset::borel());
    }
    let mut out = BTreeSet::new();
    for part in inner.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("bad parabolic index `{part}`")))?;
        if v == 0 {
            return Err(Error::Precondition("parabolic indices are 1-based".into()));
        }
        out.insert(v - 1);
    }
    Ok(ParabolicSubset { levi: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::load_bundled;

    fn cat() -> Catalog {
        load_bundled().unwrap()
    }

    #[test]
    fn report_round_trip() {
        let r = VerificationReport::new("x:y", Status::Fail)
            .with_witness(json!({ "lambda": [1, -2] }))
            .stat("n", 3);
        let back = VerificationReport::from_json_line(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
        assert_eq!(witness_lambda(&back), Some(vec![1, -2]));
    }

    #[test]
    fn interval_examples() {
        let a2 = CartanType::new(Series::A, 2).unwrap();
        let r = check_interval_lemma(a2, &ParabolicSubset::new([0]));
        assert_eq!(r.status, Status::Pass);
        let lv = &r.stats["levels"][0];
        assert_eq!(lv["values"], json!(["-1/2", "1/2"]));
        let a3 = CartanType::new(Series::A, 3).unwrap();
        let r = check_interval_lemma(a3, &ParabolicSubset::new([0, 2]));
        assert_eq!(r.stats["levels"].as_array().unwrap().len(), 1);
        assert_eq!(r.stats["levels"][0]["c0"], json!(2));
    }

    #[test]
    fn subdiagram_classification() {
        let e7 = RootSystem::new(CartanType::new(Series::E, 7).unwrap());
        let e6 = subdiagram_types(e7.cartan(), &ParabolicSubset::new(0..6)).unwrap();
        assert_eq!(fmt_types(&e6), "E6");
        let d6 = subdiagram_types(e7.cartan(), &ParabolicSubset::new(1..7)).unwrap();
        assert_eq!(fmt_types(&d6), "D6");
        let d4 = RootSystem::new(CartanType::new(Series::D, 4).unwrap());
        let t = subdiagram_types(d4.cartan(), &ParabolicSubset::new([0, 2, 3])).unwrap();
        assert_eq!(fmt_types(&t), "A1+A1+A1");
        let t = subdiagram_types(d4.cartan(), &ParabolicSubset::new([0, 1, 2])).unwrap();
        assert_eq!(fmt_types(&t), "A3");
    }

    #[test]
    fn parabolic_parsing() {
        assert_eq!(parse_parabolic("S={}").unwrap(), ParabolicSubset::borel());
        assert_eq!(parse_parabolic("{1,3}").unwrap(), ParabolicSubset::new([0, 2]));
        assert!(parse_parabolic("{0}").is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let c = cat();
        let f = c.get("sl(3,R)").unwrap();
        for s in proper_parabolics(f).unwrap() {
            let r = estimate0_sweep(f, &s, 2);
            assert_eq!(r.status, Status::Pass, "{r:?}");
            let r = check_lemma_half(f, &s, 50);
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn strictly_dominant_lambda_counts_everything() {
        let c = cat();
        let f = c.get("su(2,1)").unwrap();
        let s = ParabolicSubset::borel();
        let terms = estimate_terms(f, &s, &[1, 1]);
        // ρ may or may not satisfy the a' condition on this Cartan; when it
        // does, every nilradical root is positive
        if let Ok(t) = terms {
            let dim_n = adapted_cartan(f, &s).unwrap().nilradical.len() as u64;
            assert_eq!(t.count, dim_n);
        }
    }
}
