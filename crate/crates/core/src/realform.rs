//! The catalog of real forms.
//!
//! Each form is shipped as one TOML descriptor carrying two independent
//! encodings of the same real Lie algebra:
//!
//! * a Vogan diagram (diagram involution plus painted nodes) which fixes the
//!   Cartan involution on a fundamental Cartan subalgebra, and
//! * Satake data (restricted root type and multiplicities) which fixes the
//!   minimal parabolic geometry.
//!
//! Both are validated against the expected dimensions at load time.
//!
//! ```toml
//! schema_version = 1
//! id = "sl(3,R)"
//! complex_type = "A2"
//! automorphism = [2, 1]   # image of each simple node, 1-based
//! painted = []            # painted (noncompact) fixed nodes, 1-based
//!
//! [expected]
//! dim_g = 8
//! dim_k = 3
//! rank_kc = 1
//!
//! [satake]
//! restricted_type = "A2"  # "none" for compact forms, "BCn" when non-reduced
//! simple_mults = [1, 1]
//! doubled_mult = 0        # multiplicity of 2β for the short β of a BC system
//! dim_a0 = 2
//! dim_m0 = 0
//!
//! [literature]            # optional
//! r_prime = 2
//! r_g = 2
//! source = "table2:sl_n(R)"
//! ```
//!
//! Complex simple algebras viewed as real (`id = "complex:X"`) set
//! `realification = true`; their root system is two copies of `X` and the
//! automorphism swaps the copies.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::rootsys::{CartanType, RootSystem, Series};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub schema_version: u32,
    pub id: String,
    pub complex_type: String,
    #[serde(default)]
    pub realification: bool,
    pub automorphism: Vec<usize>,
    pub painted: Vec<usize>,
    pub expected: Expected,
    pub satake: SatakeRecord,
    #[serde(default)]
    pub literature: Option<Literature>,
    #[serde(default)]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub dim_g: usize,
    pub dim_k: usize,
    pub rank_kc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatakeRecord {
    pub restricted_type: String,
    pub simple_mults: Vec<u32>,
    #[serde(default)]
    pub doubled_mult: u32,
    pub dim_a0: usize,
    pub dim_m0: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Literature {
    pub r_prime: Option<u32>,
    pub r_g: Option<u32>,
    pub source: String,
}

/// Diagram involution and painted nodes (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoganDiagram {
    pub automorphism: Vec<usize>,
    pub painted: Vec<usize>,
}

impl VoganDiagram {
    pub fn is_trivial(&self) -> bool {
        self.automorphism.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Number of automorphism orbits on the simple nodes, i.e. `dim t`.
    pub fn orbit_count(&self) -> usize {
        self.automorphism
            .iter()
            .enumerate()
            .filter(|&(i, &j)| j >= i)
            .count()
    }
}

/// A restricted root with its multiplicity, in simple restricted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedRoot {
    pub coords: Vec<i64>,
    pub mult: u32,
}

/// The restricted root system of a noncompact form, realized from its
/// Satake record.
#[derive(Debug, Clone)]
pub struct RestrictedRootSystem {
    /// The reduced system of indivisible restricted roots.
    pub reduced: RootSystem,
    /// All restricted roots (both signs, including `2β`) with multiplicities.
    pub elements: Vec<RestrictedRoot>,
    pub non_reduced: bool,
    pub label: String,
}

impl RestrictedRootSystem {
    pub fn rank(&self) -> usize {
        self.reduced.rank()
    }

    pub fn positive(&self) -> impl Iterator<Item = &RestrictedRoot> {
        self.elements.iter().filter(|r| r.coords.iter().any(|&c| c > 0))
    }

    /// Σ mult over all restricted roots.
    pub fn total_mult(&self) -> usize {
        self.elements.iter().map(|r| r.mult as usize).sum()
    }

    /// `dim n` for the standard parabolic with Levi subset `levi`.
    pub fn nilradical_dim(&self, levi: &crate::rootsys::ParabolicSubset) -> usize {
        self.positive()
            .filter(|r| r.coords.iter().enumerate().any(|(j, &c)| c != 0 && !levi.contains(j)))
            .map(|r| r.mult as usize)
            .sum()
    }

    pub fn from_record(form: &str, sat: &SatakeRecord) -> Result<Self> {
        let bad = |m: String| Error::Validation {
            form: form.to_string(),
            message: m,
        };
        let label = sat.restricted_type.trim();
        if label == "none" {
            return Err(Error::NoRestrictedRoots(form.to_string()));
        }
        let (reduced_type, non_reduced) = if let Some(n) = label.strip_prefix("BC") {
            let n: usize = n
                .parse()
                .map_err(|_| bad(format!("bad restricted type `{label}`")))?;
            let t = if n == 1 {
                CartanType::new(Series::A, 1)?
            } else {
                CartanType::new(Series::B, n)?
            };
            (t, true)
        } else {
            (label.parse::<CartanType>()?, false)
        };
        let reduced = RootSystem::new(reduced_type);
        let n = reduced.rank();
        if sat.simple_mults.len() != n {
            return Err(bad(format!(
                "restricted type {label} needs {n} simple multiplicities, got {}",
                sat.simple_mults.len()
            )));
        }
        if non_reduced != (sat.doubled_mult > 0) {
            return Err(bad(
                "doubled_mult must be positive exactly for BC restricted types".into(),
            ));
        }
        // multiplicity is constant on root lengths
        let mut by_length = BTreeMap::new();
        for i in 0..n {
            let len = reduced.half_norm(reduced.simple_index(i));
            if let Some(&m) = by_length.get(&len) {
                if m != sat.simple_mults[i] {
                    return Err(bad(format!(
                        "simple restricted roots of equal length carry multiplicities {m} and {}",
                        sat.simple_mults[i]
                    )));
                }
            }
            by_length.insert(len, sat.simple_mults[i]);
        }
        let min_len = *by_length.keys().next().expect("rank >= 1");
        let mut elements = Vec::new();
        for (i, r) in reduced.roots().iter().enumerate() {
            let len = reduced.half_norm(i);
            elements.push(RestrictedRoot {
                coords: r.clone(),
                mult: by_length[&len],
            });
            // 2β for the short β of BC_n (all roots of BC_1)
            if non_reduced && len == min_len {
                elements.push(RestrictedRoot {
                    coords: r.iter().map(|c| 2 * c).collect(),
                    mult: sat.doubled_mult,
                });
            }
        }
        Ok(Self {
            reduced,
            elements,
            non_reduced,
            label: label.to_string(),
        })
    }
}

/// A validated real form.
#[derive(Debug, Clone)]
pub struct RealForm {
    pub id: String,
    pub complex_type: CartanType,
    pub realification: bool,
    pub system: RootSystem,
    pub vogan: VoganDiagram,
    pub satake: SatakeRecord,
    pub expected: Expected,
    pub literature: Option<Literature>,
    pub source_path: Option<PathBuf>,
    /// `theta_root[i]`: index of `σ(α_i-th root)` under the diagram involution.
    theta_root: Vec<usize>,
    /// Sign `c` with `θ X_α = c X_{σα}` in a Chevalley-type basis.
    theta_sign: Vec<i8>,
}

impl RealForm {
    pub fn from_descriptor(d: Descriptor, path: Option<PathBuf>) -> Result<Self> {
        let id = d.id.clone();
        let bad = |m: String| Error::Validation {
            form: id.clone(),
            message: m,
        };
        if d.schema_version != SCHEMA_VERSION {
            return Err(bad(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                d.schema_version
            )));
        }
        if d.id.starts_with("complex:") != d.realification {
            return Err(bad(
                "`complex:` ids and realification = true must go together".into(),
            ));
        }
        let complex_type: CartanType = d.complex_type.parse()?;
        let system = if d.realification {
            RootSystem::from_components(&[complex_type, complex_type])
        } else {
            RootSystem::new(complex_type)
        };
        let n = system.rank();

        if d.automorphism.len() != n {
            return Err(bad(format!(
                "automorphism has {} entries, expected {n}",
                d.automorphism.len()
            )));
        }
        let sigma: Vec<usize> = d
            .automorphism
            .iter()
            .map(|&j| {
                if j == 0 || j > n {
                    Err(bad(format!("automorphism entry {j} out of range 1..={n}")))
                } else {
                    Ok(j - 1)
                }
            })
            .collect::<Result<_>>()?;
        for i in 0..n {
            if sigma[sigma[i]] != i {
                return Err(bad("automorphism is not an involution".into()));
            }
            for j in 0..n {
                if system.cartan()[sigma[i]][sigma[j]] != system.cartan()[i][j] {
                    return Err(bad("automorphism does not preserve the Cartan matrix".into()));
                }
            }
        }
        if d.realification && (0..n).any(|i| sigma[i] != (i + n / 2) % n) {
            return Err(bad("realification must swap the two copies".into()));
        }
        let mut painted = Vec::new();
        for &p in &d.painted {
            if p == 0 || p > n {
                return Err(bad(format!("painted node {p} out of range")));
            }
            if sigma[p - 1] != p - 1 {
                return Err(bad(format!("painted node {p} is not fixed by the automorphism")));
            }
            painted.push(p - 1);
        }
        painted.sort_unstable();
        painted.dedup();
        let vogan = VoganDiagram {
            automorphism: sigma,
            painted,
        };
        if !vogan.is_trivial() && !d.realification && !complex_type.is_simply_laced() {
            return Err(bad("nontrivial diagram involution on a non-simply-laced type".into()));
        }

        let (theta_root, theta_sign) = theta_on_roots(&system, &vogan);
        for i in 0..system.len() {
            if theta_sign[i] * theta_sign[theta_root[i]] != 1 {
                return Err(bad(format!(
                    "Vogan data does not define an involution (root {})",
                    crate::rootsys::fmt_ivec(system.root(i))
                )));
            }
        }

        let form = Self {
            id: d.id,
            complex_type,
            realification: d.realification,
            system,
            vogan,
            satake: d.satake,
            expected: d.expected,
            literature: d.literature,
            source_path: path,
            theta_root,
            theta_sign,
        };
        form.validate()?;
        Ok(form)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::Validation {
            form: self.id.clone(),
            message: m,
        };
        let dim_g = self.dim_g();
        if dim_g != self.expected.dim_g {
            return Err(bad(format!(
                "dim g = {dim_g} from the root system, descriptor says {}",
                self.expected.dim_g
            )));
        }
        let (dim_k, _) = self.cartan_decomp_dims();
        if dim_k != self.expected.dim_k {
            return Err(bad(format!(
                "dim k = {dim_k} from the Vogan grading, descriptor says {}",
                self.expected.dim_k
            )));
        }
        if self.rank_kc() != self.expected.rank_kc {
            return Err(bad(format!(
                "rank k_C = {} from the Vogan diagram, descriptor says {}",
                self.rank_kc(),
                self.expected.rank_kc
            )));
        }
        if self.is_compact() {
            if self.satake.restricted_type != "none"
                || self.satake.dim_a0 != 0
                || self.satake.dim_m0 != dim_g
            {
                return Err(bad("compact form must have restricted_type = none, dim_a0 = 0, dim_m0 = dim g".into()));
            }
        } else {
            let rs = RestrictedRootSystem::from_record(&self.id, &self.satake)?;
            if rs.rank() != self.satake.dim_a0 {
                return Err(bad(format!(
                    "dim_a0 = {} but restricted rank is {}",
                    self.satake.dim_a0,
                    rs.rank()
                )));
            }
            let total = rs.total_mult() + self.satake.dim_a0 + self.satake.dim_m0;
            if total != dim_g {
                return Err(bad(format!(
                    "Satake dimension identity fails: Σ mult + dim a0 + dim m0 = {total} ≠ dim g = {dim_g}"
                )));
            }
        }
        self.q0()?;
        Ok(())
    }

    pub fn dim_g(&self) -> usize {
        self.system.rank() + self.system.len()
    }

    /// Rank of the complexification `g_C` (twice the complex rank for
    /// realifications).
    pub fn rank_gc(&self) -> usize {
        self.system.rank()
    }

    /// `rank k_C = dim t` for the fundamental Cartan.
    pub fn rank_kc(&self) -> usize {
        self.vogan.orbit_count()
    }

    /// Index of `σα` for root index `i`.
    pub fn sigma_root(&self, i: usize) -> usize {
        self.theta_root[i]
    }

    /// `c` with `θ X_α = c X_{σα}`.
    pub fn theta_sign(&self, i: usize) -> i8 {
        self.theta_sign[i]
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        self.theta_root[i] == i
    }

    /// The Z/2 grading on imaginary roots: 1 for noncompact, 0 for compact.
    pub fn compactness_grading(&self) -> BTreeMap<usize, u8> {
        (0..self.system.len())
            .filter(|&i| self.is_imaginary(i))
            .map(|i| (i, u8::from(self.theta_sign[i] < 0)))
            .collect()
    }

    /// `(dim k, dim s)` from the Vogan data on the fundamental Cartan.
    pub fn cartan_decomp_dims(&self) -> (usize, usize) {
        let mut compact = 0;
        let mut complex = 0;
        for i in 0..self.system.len() {
            if self.is_imaginary(i) {
                if self.theta_sign[i] > 0 {
                    compact += 1;
                }
            } else {
                complex += 1;
            }
        }
        let dim_k = self.rank_kc() + compact + complex / 2;
        (dim_k, self.dim_g() - dim_k)
    }

    pub fn is_compact(&self) -> bool {
        self.cartan_decomp_dims().1 == 0
    }

    /// Split means the restricted rank equals the complex rank.
    pub fn is_split(&self) -> bool {
        !self.realification && self.satake.dim_a0 == self.system.rank()
    }

    pub fn restricted_root_system(&self) -> Result<RestrictedRootSystem> {
        if self.is_compact() {
            return Err(Error::NoRestrictedRoots(self.id.clone()));
        }
        RestrictedRootSystem::from_record(&self.id, &self.satake)
    }

    /// `q_0 = (dim G/K - (rank g_C - rank k_C)) / 2`.
    pub fn q0(&self) -> Result<usize> {
        let (_, dim_s) = self.cartan_decomp_dims();
        let defect = self.rank_gc() - self.rank_kc();
        if dim_s < defect || !(dim_s - defect).is_multiple_of(2) {
            return Err(Error::Validation {
                form: self.id.clone(),
                message: format!("q0 = ({dim_s} - {defect}) / 2 is not a nonnegative integer"),
            });
        }
        Ok((dim_s - defect) / 2)
    }

    pub fn literature_r_prime(&self) -> Option<u32> {
        self.literature.as_ref().and_then(|l| l.r_prime)
    }

    pub fn literature_r_g(&self) -> Option<u32> {
        self.literature.as_ref().and_then(|l| l.r_g)
    }
}

/// Action of the Cartan involution on the root spaces of the fundamental
/// Cartan: `θ X_α = c_α X_{σα}`.
///
/// With `θ X_{α_i} = s_i X_{σα_i}` (`s_i = -1` on painted nodes) the signs
/// satisfy `c_{α+β} = c_α c_β η(α, β)` where `η(α, β) = ε(σα, σβ) ε(α, β)` and
/// `ε` is the Frenkel–Kac cocycle of a simply laced lattice. `η` is
/// symmetric and bimultiplicative, so `c` is the quadratic function
/// `c(n) = Π s_i^{n_i} · (-1)^{Σ_{i<j} h_ij n_i n_j}`. When `σ` is trivial
/// `η ≡ 1` and the grading is additive.
fn theta_on_roots(system: &RootSystem, vogan: &VoganDiagram) -> (Vec<usize>, Vec<i8>) {
    let n = system.rank();
    let sigma = &vogan.automorphism;
    let cartan = system.cartan();
    let e = |i: usize, j: usize| -> u8 { u8::from(i == j || (i < j && cartan[i][j] != 0)) };
    let mut h = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            h[i][j] = (e(sigma[i], sigma[j]) + e(i, j)) % 2;
        }
    }
    let mut roots_out = Vec::with_capacity(system.len());
    let mut signs = Vec::with_capacity(system.len());
    for r in system.roots() {
        let mut image = vec![0i64; n];
        for i in 0..n {
            image[sigma[i]] = r[i];
        }
        roots_out.push(system.index_of(&image).expect("σ maps roots to roots"));
        let mut parity: i64 = 0;
        for &p in &vogan.painted {
            parity += r[p];
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if h[i][j] == 1 {
                    parity += r[i] * r[j];
                }
            }
        }
        signs.push(if parity.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    (roots_out, signs)
}

pub fn parse_descriptor(path: &Path) -> Result<Descriptor> {
    let text = fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Loaded, validated catalog of real forms, sorted by id.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub forms: Vec<RealForm>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Result<&RealForm> {
        self.forms
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownForm(id.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &RealForm> {
        self.forms.iter()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Loads every `*.toml` descriptor in `dir`, validating eagerly.
pub fn load_catalog(dir: &Path) -> Result<Catalog> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    let mut forms = Vec::with_capacity(paths.len());
    for p in paths {
        let d = parse_descriptor(&p)?;
        forms.push(RealForm::from_descriptor(d, Some(p))?);
    }
    forms.sort_by(|a, b| a.id.cmp(&b.id));
    for w in forms.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::Validation {
                form: w[0].id.clone(),
                message: "duplicate id in catalog".into(),
            });
        }
    }
    Ok(Catalog { forms })
}

/// The catalog shipped with this crate.
pub fn bundled_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("catalog")
}

pub fn load_bundled() -> Result<Catalog> {
    load_catalog(&bundled_data_dir())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RealForm> {
        let d: Descriptor = toml::from_str(s).unwrap();
        RealForm::from_descriptor(d, None)
    }

    const SL3R: &str = r#"
schema_version = 1
id = "sl(3,R)"
complex_type = "A2"
automorphism = [2, 1]
painted = []
[expected]
dim_g = 8
dim_k = 3
rank_kc = 1
[satake]
restricted_type = "A2"
simple_mults = [1, 1]
dim_a0 = 2
dim_m0 = 0
"#;

    #[test]
    fn sl3r_dims() {
        let f = parse(SL3R).unwrap();
        assert_eq!(f.cartan_decomp_dims(), (3, 5));
        assert_eq!(f.q0().unwrap(), 2);
        // α1 + α2 is the only positive imaginary root and it is noncompact
        let g = f.compactness_grading();
        let top = f.system.index_of(&[1, 1]).unwrap();
        assert_eq!(g.get(&top), Some(&1));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn inconsistent_dim_k_is_rejected() {
        let bad = SL3R.replace("dim_k = 3", "dim_k = 5");
        let err = parse(&bad).unwrap_err().to_string();
        assert!(err.contains("sl(3,R)") && err.contains("dim k"), "{err}");
    }

    #[test]
    fn satake_identity_is_checked() {
        let bad = SL3R.replace("dim_m0 = 0", "dim_m0 = 1");
        let err = parse(&bad).unwrap_err().to_string();
        assert!(err.contains("Satake"), "{err}");
    }

    #[test]
    fn painted_node_must_be_fixed() {
        let bad = SL3R.replace("painted = []", "painted = [1]");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn empty_directory_loads_nothing() {
        let dir = std::env::temp_dir().join(format!("coho-empty-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cat = load_catalog(&dir).unwrap();
        assert!(cat.is_empty());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
