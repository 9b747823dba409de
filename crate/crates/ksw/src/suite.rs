//! The seeded whole-workbench verification suite.
//!
//! Each module group draws from its own seeded stream and returns its checks;
//! groups run on a work pool and are assembled in a fixed order, so the report
//! is byte-stable for a fixed config.

use std::collections::BTreeMap;

use ksw_core::betti::{
    audit_b2n_minus_1, audit_b3, audit_sixfold_odd, bound_exponent, default_catalog, ks_factor_dims, BoundStatus,
    CatalogEntry,
};
use ksw_core::clifford::{CliffordAlgebra, CliffordElement, Grading, Parity, DEFAULT_CAP};
use ksw_core::corr::{verify, Convention};
use ksw_core::hodge::{type_spectrum, HKStructure, Weight1Structure};
use ksw_core::kuga_satake::{
    complex_structure_holds, embedding_rank, endo_sign_laws, odd_even_iso, structure_commutators, KSStructure,
};
use ksw_core::linalg::{frac, int, primitive, rank_and_kernel};
use ksw_core::qspace::QuadraticSpace;
use ksw_core::sympow::{
    block_levels, decompose_with_cap, harmonic, harmonic_dim, harmonic_invariant_under, isotropic_span_check,
    level_two_part, sym_dim, SymTensorSpace, DEFAULT_SYM_CAP,
};
use ksw_core::weil::{
    analyze, block_instance, check_quadratic_endo, hodge_class_dimension, nonsquare_block_instance, wedge4_spectrum,
    weil_class_space, ExteriorPower,
};
use ksw_core::{Error, Matrix, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::formats::{CatalogEntryFile, Q};
use crate::instances::InstanceGen;
use crate::report::{Check, RunReport, Status};

/// The configuration shipped with the repository.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.json");

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Clifford generator cap; `None` uses the library default.
    pub cap_h: Option<usize>,
    pub linalg: LinalgConfig,
    pub qspace: QspaceConfig,
    pub clifford: CliffordConfig,
    pub ks: KsConfig,
    pub sym: SymConfig,
    pub weil: WeilConfig,
    pub betti: BettiConfig,
    pub corr: CorrConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinalgConfig {
    pub matrices: usize,
    pub max_size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QspaceConfig {
    pub forms: usize,
    pub congruences_per_form: usize,
    pub max_h: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliffordConfig {
    pub h_min: usize,
    pub h_max: usize,
    /// Extra sizes, typically above the cap to exercise the cap policy.
    pub extra_h: Vec<usize>,
    pub pairs: usize,
    pub triples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KsConfig {
    pub h_min: usize,
    pub h_max: usize,
    pub per_h: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropicCase {
    pub diagonal: Vec<Q>,
    pub k: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymConfig {
    pub surjectivity_max_h: usize,
    pub max_h: usize,
    pub max_k: usize,
    pub block_level_cases: Vec<(usize, usize)>,
    pub level_cases: Vec<(usize, usize)>,
    pub isotropic_cases: Vec<IsotropicCase>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeilConfig {
    pub blocks: Vec<Vec<i64>>,
    pub nonsquare: Vec<i64>,
    pub conjugations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BettiConfig {
    /// `None` audits the shipped catalog.
    pub catalog: Option<Vec<CatalogEntryFile>>,
    pub monotone_b2_max: u64,
    pub factor_h_max: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrCase {
    pub b3: usize,
    pub n: u32,
    #[serde(default = "default_convention")]
    pub convention: String,
    #[serde(default = "default_true")]
    pub expect_pass: bool,
}

fn default_convention() -> String {
    Convention::Koszul.name().into()
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrConfig {
    pub cases: Vec<CorrCase>,
    pub exhaustive_b3_max: usize,
    pub exhaustive_n_max: u32,
}

impl Default for LinalgConfig {
    fn default() -> Self {
        LinalgConfig {
            matrices: 40,
            max_size: 24,
        }
    }
}

impl Default for QspaceConfig {
    fn default() -> Self {
        QspaceConfig {
            forms: 6,
            congruences_per_form: 50,
            max_h: 6,
        }
    }
}

impl Default for CliffordConfig {
    fn default() -> Self {
        CliffordConfig {
            h_min: 2,
            h_max: 10,
            extra_h: Vec::new(),
            pairs: 100,
            triples: 50,
        }
    }
}

impl Default for KsConfig {
    fn default() -> Self {
        KsConfig {
            h_min: 3,
            h_max: 8,
            per_h: 20,
        }
    }
}

impl Default for SymConfig {
    fn default() -> Self {
        SymConfig {
            surjectivity_max_h: 7,
            max_h: 6,
            max_k: 5,
            block_level_cases: vec![(4, 4), (5, 3)],
            level_cases: vec![(5, 3), (6, 3), (7, 3), (4, 5)],
            isotropic_cases: Vec::new(),
        }
    }
}

impl Default for WeilConfig {
    fn default() -> Self {
        WeilConfig {
            blocks: vec![vec![1, 1, -1, -1], vec![1, 1, 1, 1], vec![1, 1, 1, -1]],
            nonsquare: vec![2],
            conjugations: 2,
        }
    }
}

impl Default for BettiConfig {
    fn default() -> Self {
        BettiConfig {
            catalog: None,
            monotone_b2_max: 200,
            factor_h_max: 24,
        }
    }
}

impl Default for CorrConfig {
    fn default() -> Self {
        CorrConfig {
            cases: vec![CorrCase {
                b3: 8,
                n: 2,
                convention: default_convention(),
                expect_pass: true,
            }],
            exhaustive_b3_max: 10,
            exhaustive_n_max: 4,
        }
    }
}

impl SuiteConfig {
    pub fn shipped() -> Self {
        serde_json::from_str(DEFAULT_CONFIG).expect("shipped config parses")
    }

    fn cap(&self) -> usize {
        self.cap_h.unwrap_or(DEFAULT_CAP)
    }
}

pub fn parse_convention(name: &str) -> Option<Convention> {
    [Convention::Koszul, Convention::NoExchangeSign, Convention::CommutingOdd]
        .into_iter()
        .find(|c| c.name() == name)
}

type Group = fn(&SuiteConfig) -> Vec<Check>;

const GROUPS: [(&str, Group); 9] = [
    ("exact_linalg", linalg_checks),
    ("qspace", qspace_checks),
    ("clifford", clifford_checks),
    ("hodge", hodge_checks),
    ("kuga_satake", ks_checks),
    ("weil", weil_checks),
    ("sympow", sym_checks),
    ("betti", betti_checks),
    ("formal_corr", corr_checks),
];

/// Runs every module's invariant suite.
pub fn run_full_suite(config: &SuiteConfig) -> RunReport {
    let groups: Vec<Vec<Check>> = GROUPS.par_iter().map(|(_, f)| f(config)).collect();
    let mut report = RunReport::new("suite");
    report.seed = Some(config.seed);
    let mut per_group = BTreeMap::new();
    for ((name, _), checks) in GROUPS.iter().zip(groups) {
        per_group.insert(*name, checks.len());
        for c in checks {
            report.push(c);
        }
    }
    report.result = json!({ "groups": per_group, "cap_h": config.cap() });
    report.finish()
}

/// Accumulates pass/fail over many instances into one check.
struct Tally {
    name: String,
    count: usize,
    failures: Vec<String>,
    errors: Vec<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            count: 0,
            failures: Vec::new(),
            errors: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    fn error(&mut self, label: String, e: &Error) {
        self.count += 1;
        self.errors.push(format!("{label}: {e}"));
    }

    fn finish(self, what: &str) -> Check {
        let mut bad: Vec<String> = self.failures;
        bad.extend(self.errors);
        if bad.is_empty() {
            Check::new(self.name, Status::Pass, format!("{} {what}", self.count))
        } else {
            let shown: Vec<&str> = bad.iter().take(3).map(String::as_str).collect();
            Check::new(
                self.name,
                Status::Fail,
                format!("{} of {} {what} failed: {}", bad.len(), self.count, shown.join("; ")),
            )
        }
    }
}

fn linalg_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut g = InstanceGen::new(cfg.seed, "linalg");
    let mut rank_nullity = Tally::new("linalg.rank_nullity");
    let mut primitive_kernel = Tally::new("linalg.primitive_kernel");
    let mut inverse = Tally::new("linalg.inverse_exact");
    let max = cfg.linalg.max_size.max(1) as i64;
    for t in 0..cfg.linalg.matrices {
        let rows = g.range(1, max) as usize;
        let cols = g.range(1, max) as usize;
        let m = if t % 2 == 0 {
            g.rational_matrix(rows, cols, 100)
        } else {
            let r = g.range(1, rows.min(cols) as i64) as usize;
            g.low_rank_matrix(rows, cols, r)
        };
        let (r, ker) = rank_and_kernel(&m);
        let annihilated = ker.iter().all(|v| m.mul_vec(v).iter().all(Zero::is_zero));
        rank_nullity.record(r + ker.len() == cols && annihilated, || format!("{rows}x{cols}"));
        let prim = ker.iter().all(|v| {
            let p: Vec<Rational> = primitive(v).into_iter().map(Rational::from_integer).collect();
            let neg: Vec<Rational> = p.iter().map(|x| -x).collect();
            v.iter().all(|x| x.is_integer()) && (*v == p || *v == neg)
        });
        primitive_kernel.record(prim, || format!("{rows}x{cols}"));

        let n = g.range(1, max.min(16)) as usize;
        let sq = g.rational_matrix(n, n, 100);
        match sq.inverse() {
            Ok(inv) => inverse.record((&sq * &inv).is_identity() && (&inv * &sq).is_identity(), || {
                format!("{n}x{n}")
            }),
            Err(Error::Singular) => inverse.record(sq.rank() < n, || format!("{n}x{n} singular with full rank")),
            Err(e) => inverse.error(format!("{n}x{n}"), &e),
        }
    }
    vec![
        rank_nullity.finish("matrices"),
        primitive_kernel.finish("kernels"),
        inverse.finish("square matrices"),
    ]
}

fn qspace_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut g = InstanceGen::new(cfg.seed, "qspace");
    let mut signature = Tally::new("qspace.signature_invariant");
    let mut disc = Tally::new("qspace.discriminant_class");
    let mut diag = Tally::new("qspace.diagonalization");
    for _ in 0..cfg.qspace.forms {
        let h = g.range(2, cfg.qspace.max_h.max(2) as i64) as usize;
        let d = g.diagonal_form(h);
        let base = QuadraticSpace::from_diagonal_i64(&d).expect("nondegenerate");
        let d0 = base.discriminant();
        for _ in 0..cfg.qspace.congruences_per_form {
            let p = g.nonsingular(h);
            let s = match base.congruent(&p) {
                Ok(s) => s,
                Err(e) => {
                    signature.error(format!("{d:?}"), &e);
                    continue;
                }
            };
            signature.record(s.signature() == base.signature(), || format!("{d:?}"));
            disc.record(s.discriminant() == d0, || format!("{d:?}"));
            let t = s.basis_change();
            diag.record(
                &(&t.transpose() * s.gram()) * t == Matrix::diagonal(s.diag_values()),
                || format!("{d:?}"),
            );
        }
    }
    vec![
        signature.finish("congruences"),
        disc.finish("congruences"),
        diag.finish("congruences"),
    ]
}

fn mixed_diag(h: usize) -> Vec<Rational> {
    (0..h)
        .map(|i| int(if i % 3 == 2 { -(i as i64) } else { i as i64 + 1 }))
        .collect()
}

fn clifford_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let cap = cfg.cap();
    let mut out = Vec::new();
    let mut dims = Tally::new("clifford.dimensions");
    let mut sizes: Vec<usize> = (cfg.clifford.h_min..=cfg.clifford.h_max).collect();
    let mut extra = Vec::new();
    for &h in &cfg.clifford.extra_h {
        if !sizes.contains(&h) {
            extra.push(h);
        }
    }
    sizes.sort_unstable();
    for &h in &sizes {
        match CliffordAlgebra::new(mixed_diag(h), cap) {
            Ok(alg) => dims.record(
                alg.basis(Grading::Full).len() == 1 << h && alg.basis(Grading::Even).len() == 1 << (h - 1),
                || format!("h={h}"),
            ),
            Err(e) => dims.error(format!("h={h}"), &e),
        }
    }
    out.push(dims.finish(&format!("algebras, h={}..{}", cfg.clifford.h_min, cfg.clifford.h_max)));
    for h in extra {
        let name = format!("clifford.dimensions[h={h}]");
        out.push(match CliffordAlgebra::new(mixed_diag(h), cap) {
            Ok(alg) => Check::pass_if(
                name,
                alg.basis(Grading::Full).len() == 1 << h && alg.basis(Grading::Even).len() == 1 << (h - 1),
                format!("2^{h} blades"),
            ),
            Err(e @ Error::CapExceeded { .. }) => Check::new(name, Status::Skipped, e.to_string()),
            Err(e) => Check::new(name, Status::Fail, e.to_string()),
        });
    }

    let mut g = InstanceGen::new(cfg.seed, "clifford");
    let mut anti = Tally::new("clifford.vector_anticommutator");
    for _ in 0..cfg.clifford.pairs {
        let h = g.range(2, 6) as usize;
        let d: Vec<Rational> = g.diagonal_form(h).into_iter().map(int).collect();
        let alg = CliffordAlgebra::new(d, cap).expect("small");
        let v = CliffordElement::vector(&(0..h).map(|_| g.rational(9)).collect::<Vec<_>>());
        let w = CliffordElement::vector(&(0..h).map(|_| g.rational(9)).collect::<Vec<_>>());
        let lhs = alg
            .mul(&v, &w)
            .expect("same algebra")
            .add(&alg.mul(&w, &v).expect("same algebra"));
        let rhs = CliffordElement::scalar(h, int(2) * alg.pairing(&v, &w));
        anti.record(lhs == rhs, || format!("h={h}"));
    }
    let mut assoc = Tally::new("clifford.associativity_parity");
    for _ in 0..cfg.clifford.triples {
        let h = g.range(2, 5) as usize;
        let d: Vec<Rational> = g.diagonal_form(h).into_iter().map(int).collect();
        let alg = CliffordAlgebra::new(d, cap).expect("small");
        let el = |g: &mut InstanceGen| {
            let grading = if g.coin() { Grading::Even } else { Grading::Odd };
            let coords: Vec<Rational> = (0..alg.piece_dim(grading))
                .map(|_| if g.coin() { int(0) } else { int(g.range(-3, 3)) })
                .collect();
            (alg.element_from_coords(grading, &coords), grading == Grading::Odd)
        };
        let (a, pa) = el(&mut g);
        let (b, pb) = el(&mut g);
        let (c, _) = el(&mut g);
        let ab = alg.mul(&a, &b).expect("same algebra");
        let left = alg.mul(&ab, &c).expect("same algebra");
        let right = alg
            .mul(&a, &alg.mul(&b, &c).expect("same algebra"))
            .expect("same algebra");
        let expected = if pa ^ pb { Parity::Odd } else { Parity::Even };
        let parity_ok = ab.is_zero() || ab.parity() == expected;
        assoc.record(left == right && parity_ok, || format!("h={h}"));
    }
    out.push(anti.finish("vector pairs"));
    out.push(assoc.finish("triples"));
    out
}

fn ks_instances(cfg: &SuiteConfig, stream: &str) -> Vec<HKStructure> {
    let mut g = InstanceGen::new(cfg.seed, stream);
    let mut out = Vec::new();
    for h in cfg.ks.h_min..=cfg.ks.h_max {
        for _ in 0..cfg.ks.per_h {
            out.push(g.hk(h));
        }
    }
    out
}

fn hk_label(hk: &HKStructure) -> String {
    format!("h={} sig={:?}", hk.dim(), hk.space().signature())
}

fn hodge_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut sigma = Tally::new("hodge.period_relations");
    let mut skew = Tally::new("hodge.rotation_skew");
    let mut spectrum = Tally::new("hodge.period_spectrum");
    for hk in ks_instances(cfg, "periods") {
        let two_n = int(2) * hk.period().norm();
        let (re, im) = hk.sigma_square();
        sigma.record(re.is_zero() && im.is_zero() && hk.sigma_sigma_bar() == two_n, || {
            hk_label(&hk)
        });
        let a = hk.rotation_generator();
        let gram = hk.space().gram();
        skew.record((&(&a.transpose() * gram) + &(gram * &a)).is_zero(), || hk_label(&hk));
        match type_spectrum(&a, hk.period().norm(), 2) {
            Ok(s) => spectrum.record((s.get(2, 0), s.get(1, 1), s.get(0, 2)) == (1, hk.dim() - 2, 1), || {
                hk_label(&hk)
            }),
            Err(e) => spectrum.error(hk_label(&hk), &e),
        }
    }
    let what = format!("periods, h={}..{}", cfg.ks.h_min, cfg.ks.h_max);
    vec![sigma.finish(&what), skew.finish(&what), spectrum.finish(&what)]
}

fn ks_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let cap = cfg.cap();
    let mut tallies: Vec<Tally> = KS_CHECK_NAMES.iter().map(|n| Tally::new(n)).collect();
    let results: Vec<Result<[bool; 8], Error>> = ks_instances(cfg, "periods")
        .into_par_iter()
        .map(|hk| ks_instance_checks(hk, cap))
        .collect();
    for r in results {
        match r {
            Ok(flags) => {
                for (t, ok) in tallies.iter_mut().zip(flags) {
                    t.record(ok, || "instance".into());
                }
            }
            Err(e) => {
                for t in &mut tallies {
                    t.error("instance".into(), &e);
                }
            }
        }
    }
    // Right multiplication by a random bivector, one fresh instance per size.
    let mut g = InstanceGen::new(cfg.seed, "ks-right");
    for h in cfg.ks.h_min..=cfg.ks.h_max {
        let hk = g.hk(h);
        let label = hk_label(&hk);
        let (a, b) = (g.index(h), g.index(h));
        let report = KSStructure::build(hk, cap).and_then(|ks| {
            let c = ks
                .algebra()
                .mul(&ks.algebra().basis_vector(a), &ks.algebra().basis_vector(b))?;
            structure_commutators(&ks, &[c])
        });
        match report {
            Ok(r) => tallies[1].record(r.all_passed(), || label.clone()),
            Err(e) => tallies[1].error(label, &e),
        }
    }
    let what = format!("instances, h={}..{}", cfg.ks.h_min, cfg.ks.h_max);
    tallies.into_iter().map(|t| t.finish(&what)).collect()
}

pub(crate) const KS_CHECK_NAMES: [&str; 8] = [
    "ks.complex_structure",
    "ks.commutators",
    "ks.embedding_rank",
    "ks.embedding_sign_laws",
    "ks.odd_even_iso",
    "ks.torus_dim",
    "ks.basis_independence",
    "ks.orientation_reversal",
];

/// Outcomes in the order of [`KS_CHECK_NAMES`].
pub(crate) fn ks_instance_checks(hk: HKStructure, cap: usize) -> Result<[bool; 8], Error> {
    let h = hk.dim();
    let rotated = hk.period().rotated(hk.space(), &frac(3, 5), &frac(4, 5))?;
    let hk_rot = HKStructure::from_parts(hk.space().clone(), rotated)?;
    let hk_rev = HKStructure::from_parts(hk.space().clone(), hk.period().reversed())?;
    let ks = KSStructure::build(hk, cap)?;
    let (e2, j2) = complex_structure_holds(&ks);
    let top = ks.algebra().basis_vector(h - 1);
    let commutators = structure_commutators(&ks, &[top])?.all_passed();
    let v0 = ks.default_v0();
    let rank = embedding_rank(&ks, &v0)? == h;
    let signs = endo_sign_laws(&ks, &v0)?.all_passed();
    let iso = odd_even_iso(&ks, &v0)?.verify(&ks);
    let torus = ks.torus_complex_dim() == 1 << (h - 2) && ks.even_dim() == 1 << (h - 1);
    let independent = KSStructure::build(hk_rot, cap)?.e() == ks.e();
    let rev = KSStructure::build(hk_rev, cap)?;
    let reversal = rev.e() == &ks.e().neg() && rev.j_even() == &-ks.j_even();
    Ok([e2 && j2, commutators, rank, signs, iso, torus, independent, reversal])
}

fn weil_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut g = InstanceGen::new(cfg.seed, "weil");
    let mut trace = Tally::new("weil.trace_criterion");
    let mut space_dim = Tally::new("weil.class_space_dim");
    let mut certify = Tally::new("weil.certify_22");
    let mut characterization = Tally::new("weil.class_space_invariant");
    let mut components = Tally::new("weil.hodge_components");
    let mut fixtures: Vec<(String, Matrix, Matrix)> = Vec::new();
    for m in &cfg.weil.blocks {
        let (j, phi) = block_instance(m);
        fixtures.push((format!("blocks {m:?}"), j, phi));
    }
    for &d in &cfg.weil.nonsquare {
        let (j, phi) = nonsquare_block_instance(d, 2);
        fixtures.push((format!("d={d}"), j, phi));
    }
    let mut conjugated = Vec::new();
    for (label, j, phi) in &fixtures {
        let n = j.rows();
        for c in 0..cfg.weil.conjugations {
            let p = g.nonsingular(n);
            let pinv = p.inverse().expect("nonsingular");
            conjugated.push((format!("{label} conj {c}"), &(&p * j) * &pinv, &(&p * phi) * &pinv));
        }
    }
    fixtures.extend(conjugated);
    for (label, j, phi) in &fixtures {
        let mut run = || -> Result<(), Error> {
            let w = Weight1Structure::new(j.clone())?;
            let rep = analyze(&w, phi)?;
            trace.record(
                rep.is_weil == rep.trace_phi_j_zero && rep.is_weil == (rep.mult_plus == rep.mult_minus),
                || label.clone(),
            );
            if j.rows() == 8 {
                space_dim.record(rep.weil_space_dim == Some(2), || label.clone());
                certify.record(rep.all_weil_classes_22 == Some(rep.is_weil), || label.clone());
                let endo = check_quadratic_endo(&w, phi)?;
                let classes = weil_class_space(&endo)?;
                let ext = ExteriorPower::new(8, 4);
                let (dj, dphi) = (ext.derivation(j)?, ext.derivation(phi)?);
                let stable = classes
                    .basis()
                    .iter()
                    .all(|v| classes.contains(&dj.mul_vec(v)) && classes.contains(&dphi.mul_vec(v)));
                characterization.record(stable, || label.clone());
                let spectrum = wedge4_spectrum(&w)?;
                components.record(
                    hodge_class_dimension(&w) == spectrum.get(2, 2)
                        && spectrum.total() == 70
                        && spectrum.is_symmetric(),
                    || label.clone(),
                );
            }
            Ok(())
        };
        if let Err(e) = run() {
            trace.error(label.clone(), &e);
        }
    }
    vec![
        trace.finish("fixtures"),
        space_dim.finish("dimension-8 fixtures"),
        certify.finish("dimension-8 fixtures"),
        characterization.finish("dimension-8 fixtures"),
        components.finish("dimension-8 fixtures"),
    ]
}

/// `(h, k, surjective, decomposition, symmetric)` for one sym case.
type SymCaseResult = (usize, usize, Option<bool>, Option<Result<bool, Error>>, Option<bool>);

fn sym_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = &cfg.sym;
    let mut g = InstanceGen::new(cfg.seed, "sym");
    let mut out = Vec::new();

    let mut cases = Vec::new();
    for h in 2..=c.surjectivity_max_h.max(c.max_h) {
        let d = g.diagonal_form(h);
        let p = g.unipotent(h, 1);
        let space = QuadraticSpace::from_diagonal_i64(&d)
            .expect("nondegenerate")
            .congruent(&p)
            .expect("unipotent");
        for k in 2..=c.max_k {
            cases.push((h, k, space.clone(), d.clone()));
        }
    }
    let results: Vec<SymCaseResult> = cases
        .into_par_iter()
        .map(|(h, k, space, d)| {
            let surj = (h <= c.surjectivity_max_h).then(|| {
                SymTensorSpace::with_cap(&space, k, DEFAULT_SYM_CAP)
                    .map(|s| harmonic(&s).dim() + sym_dim(h, k - 2) == sym_dim(h, k))
                    .unwrap_or(false)
            });
            let dec = (h <= c.max_h).then(|| {
                decompose_with_cap(&space, k, DEFAULT_SYM_CAP).map(|dec| {
                    let dims_ok = dec
                        .blocks
                        .iter()
                        .all(|b| b.subspace.dim() == harmonic_dim(h, k - 2 * b.l));
                    dims_ok && dec.total == sym_dim(h, k) && !dec.minor.is_zero()
                })
            });
            let sym = (h <= c.max_h).then(|| {
                let diag = QuadraticSpace::from_diagonal_i64(&d).expect("nondegenerate");
                let s = SymTensorSpace::with_cap(&diag, k, DEFAULT_SYM_CAP).expect("within cap");
                equal_norm_swaps(&d).iter().all(|p| harmonic_invariant_under(&s, p))
            });
            (h, k, surj, dec, sym)
        })
        .collect();
    let mut surj = Tally::new("sym.contraction_surjective");
    let mut dec = Tally::new("sym.decomposition");
    let mut symm = Tally::new("sym.harmonic_symmetry");
    for (h, k, s, d, y) in results {
        if let Some(ok) = s {
            surj.record(ok, || format!("h={h} k={k}"));
        }
        match d {
            Some(Ok(ok)) => dec.record(ok, || format!("h={h} k={k}")),
            Some(Err(e)) => dec.error(format!("h={h} k={k}"), &e),
            None => {}
        }
        if let Some(ok) = y {
            symm.record(ok, || format!("h={h} k={k}"));
        }
    }
    out.push(surj.finish(&format!("cases, h<={} k<={}", c.surjectivity_max_h, c.max_k)));
    out.push(dec.finish(&format!("cases, h<={} k<={}", c.max_h, c.max_k)));
    out.push(symm.finish(&format!("cases, h<={} k<={}", c.max_h, c.max_k)));

    let mut levels = Tally::new("sym.block_levels");
    for &(h, k) in &c.block_level_cases {
        let hk = g.hk(h);
        let label = format!("h={h} k={k}");
        match decompose_with_cap(hk.space(), k, DEFAULT_SYM_CAP).and_then(|d| block_levels(&hk, &d)) {
            Ok(bl) => levels.record(bl.iter().all(|b| b.level as usize == 2 * (k - 2 * b.l)), || {
                label.clone()
            }),
            Err(e) => levels.error(label, &e),
        }
    }
    out.push(levels.finish("cases"));

    let level_inputs: Vec<(usize, usize, HKStructure)> = c.level_cases.iter().map(|&(h, k)| (h, k, g.hk(h))).collect();
    let level_results: Vec<Check> = level_inputs
        .into_par_iter()
        .map(|(h, k, hk)| {
            let name = format!("sym.level_two[h={h},k={k}]");
            match level_two_part(&hk, k) {
                Ok(part) => Check::pass_if(
                    name,
                    part.subspace.dim() == h,
                    format!(
                        "kernel and image routes agree, dim {}; level>2 part dim {}",
                        part.subspace.dim(),
                        sym_dim(h, k) - part.subspace.dim()
                    ),
                ),
                Err(e) => Check::new(name, Status::Fail, e.to_string()),
            }
        })
        .collect();
    out.extend(level_results);

    for case in &c.isotropic_cases {
        let diag: Vec<Rational> = case.diagonal.iter().map(|q| q.0.clone()).collect();
        let name = format!(
            "sym.isotropic_span[{},k={}]",
            diag.iter()
                .map(crate::formats::rational_string)
                .collect::<Vec<_>>()
                .join(","),
            case.k
        );
        let check = QuadraticSpace::diagonal(&diag)
            .and_then(|s| SymTensorSpace::with_cap(&s, case.k, DEFAULT_SYM_CAP))
            .and_then(|s| isotropic_span_check(&s));
        out.push(match check {
            Ok(r) => Check::pass_if(
                name,
                r.spans,
                format!("span {} of {} at height {}", r.span_dim, r.harmonic_dim, r.height),
            ),
            Err(Error::NotApplicable) => Check::new(name, Status::Vacuous, "no rational isotropic vectors"),
            Err(e) => Check::new(name, Status::Fail, e.to_string()),
        });
    }
    out
}

/// Transpositions of diagonal basis vectors with equal norm.
fn equal_norm_swaps(d: &[i64]) -> Vec<Matrix> {
    let h = d.len();
    let mut out = Vec::new();
    for a in 0..h {
        for b in a + 1..h {
            if d[a] == d[b] {
                let mut p = Matrix::identity(h);
                p[(a, a)] = int(0);
                p[(b, b)] = int(0);
                p[(a, b)] = Rational::one();
                p[(b, a)] = Rational::one();
                out.push(p);
            }
        }
    }
    out
}

fn betti_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let kummer = bound_exponent(7, true).map(|k| (k, 1u128 << k));
    out.push(Check::pass_if(
        "betti.kummer_bound",
        kummer == Ok((3, 8)),
        format!("b2=7 gives {kummer:?}"),
    ));
    let catalog: Vec<CatalogEntry> = match &cfg.betti.catalog {
        Some(c) => c.iter().cloned().map(CatalogEntry::from).collect(),
        None => default_catalog(),
    };
    for entry in &catalog {
        out.push(audit_entry(entry));
    }
    let mut mono = Tally::new("betti.monotone");
    for b2 in 3..=cfg.betti.monotone_b2_max {
        for flag in [false, true] {
            match (bound_exponent(b2, flag), bound_exponent(b2 + 2, flag)) {
                (Ok(a), Ok(b)) => mono.record(a <= b, || format!("b2={b2}")),
                (Err(e), _) | (_, Err(e)) => mono.error(format!("b2={b2}"), &e),
            }
        }
    }
    out.push(mono.finish("comparisons"));
    let f7 = ks_factor_dims(7);
    let f6 = ks_factor_dims(6);
    let mut general = true;
    for h in 3..=cfg.betti.factor_h_max {
        let expect: Vec<u128> = if h % 2 == 1 {
            vec![1 << ((h - 3) / 2), 1 << ((h - 1) / 2)]
        } else {
            vec![1 << (h / 2 - 2), 1 << (h / 2 - 1), 1 << (h / 2)]
        };
        general &= ks_factor_dims(h).as_deref() == Ok(&expect[..]);
    }
    out.push(Check::pass_if(
        "betti.factor_dims",
        f7.as_deref() == Ok(&[4, 8][..]) && f6.as_deref() == Ok(&[2, 4, 8][..]) && general,
        format!("h=7 {f7:?}, h=6 {f6:?}"),
    ));
    out
}

pub(crate) fn audit_entry(entry: &CatalogEntry) -> Check {
    let name = format!("betti.audit[{}]", entry.name);
    if let Err(e) = entry.validate() {
        return Check::new(name, Status::Fail, e.to_string());
    }
    let primary = if entry.dim2n == 6 {
        audit_sixfold_odd(entry)
    } else {
        audit_b2n_minus_1(entry)
    };
    let b3 = audit_b3(entry);
    let mut parts = Vec::new();
    let mut status = Status::Pass;
    for (label, r) in [("odd", primary), ("b3", b3)] {
        match r {
            Ok(r) => {
                parts.push(format!(
                    "{label}: b{} vs 2^{} = {}: {}",
                    r.degree,
                    r.k,
                    r.bound,
                    r.status.as_str()
                ));
                if r.status == BoundStatus::Fail {
                    status = Status::Fail;
                }
            }
            Err(Error::MissingHypothesisData) => parts.push(format!("{label}: missing data")),
            Err(e) => {
                parts.push(format!("{label}: {e}"));
                status = Status::Fail;
            }
        }
    }
    if status == Status::Pass && parts.iter().all(|p| p.ends_with("missing data")) {
        status = Status::Vacuous;
    }
    Check::new(name, status, parts.join("; "))
}

fn corr_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for case in &cfg.corr.cases {
        let name = format!("corr.identity[b3={},n={},{}]", case.b3, case.n, case.convention);
        let Some(conv) = parse_convention(&case.convention) else {
            out.push(Check::new(
                name,
                Status::Fail,
                format!("unknown convention {:?}", case.convention),
            ));
            continue;
        };
        out.push(match verify(case.b3, case.n, conv) {
            Ok(r) => {
                let detail = format!(
                    "{} pairs, coefficient {}, uniform {}, concentrated {}, graded-commutative {}, pushforward {}",
                    r.pairs,
                    r.coefficient
                        .as_ref()
                        .map(crate::formats::rational_string)
                        .unwrap_or_else(|| "none".into()),
                    r.uniform,
                    r.concentrated,
                    r.graded_commutative,
                    r.pushforward_matches
                );
                let detail = if case.expect_pass {
                    detail
                } else {
                    format!("expected to fail; {detail}")
                };
                Check::pass_if(name, r.passed() == case.expect_pass, detail)
            }
            Err(e) => Check::new(name, Status::Fail, e.to_string()),
        });
    }
    let mut exhaustive = Tally::new("corr.exhaustive");
    for b3 in 2..=cfg.corr.exhaustive_b3_max {
        for n in 2..=cfg.corr.exhaustive_n_max {
            match verify(b3, n, Convention::Koszul) {
                Ok(r) => exhaustive.record(r.passed(), || format!("b3={b3} n={n}")),
                Err(e) => exhaustive.error(format!("b3={b3} n={n}"), &e),
            }
        }
    }
    out.push(exhaustive.finish(&format!(
        "cases, b3<={} n<={}",
        cfg.corr.exhaustive_b3_max, cfg.corr.exhaustive_n_max
    )));
    for conv in [Convention::NoExchangeSign, Convention::CommutingOdd] {
        let name = format!("corr.negative_control[{}]", conv.name());
        out.push(match verify(8, 2, conv) {
            Ok(r) => Check::pass_if(
                name,
                !r.passed(),
                format!("uniform {}, graded-commutative {}", r.uniform, r.graded_commutative),
            ),
            Err(e) => Check::new(name, Status::Fail, e.to_string()),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_parses() {
        let c = SuiteConfig::shipped();
        assert_eq!(c.ks.h_min, 3);
        assert_eq!(c.ks.h_max, 8);
        assert!(c.ks.per_h * (c.ks.h_max - c.ks.h_min + 1) >= 100);
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"sed": 1}"#).is_err());
    }

    #[test]
    fn conventions_round_trip() {
        for c in [Convention::Koszul, Convention::NoExchangeSign, Convention::CommutingOdd] {
            assert_eq!(parse_convention(c.name()), Some(c));
        }
        assert_eq!(parse_convention("other"), None);
    }

    #[test]
    fn equal_norm_swaps_are_isometries() {
        let d = [2, 2, -1, -1, 3];
        let swaps = equal_norm_swaps(&d);
        assert_eq!(swaps.len(), 2);
        let g = Matrix::diagonal(&d.iter().map(|&x| int(x)).collect::<Vec<_>>());
        for p in swaps {
            assert_eq!(&(&p.transpose() * &g) * &p, g);
        }
    }
}
