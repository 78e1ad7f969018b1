//! Verification suites, their machine-readable reports, and the file outputs
//! of the flow and spectral commands.

use crate::algebra::{bracket, identity2, inner, l_decompose, l_generator, l_minus_basis, l_plus_basis, star, LieElem};
use crate::clifford::{self, cluster, derived_endos, load_clifford, nahm_pole_endo, u_matrix, Endo24};
use crate::error::{Error, Result};
use crate::flow::{
    self, gauge_transform, gradient_check, kuranishi_w, lojasiewicz_fit, run_flow, FlowConfig, FlowParams,
    FlowStatus, FlowTrace, LojasiewiczFit, ModeVector, TorusField,
};
use crate::model::{richardson_sweep, sample_points, ModelSolution, PropertyReport};
use crate::operator::{
    apply_d, apply_d_dagger, apply_l, bochner_check, depiction_disagreement, duality_defect, lattice_l_spectrum,
    omega_apply, pythagoras_defect, spatial_identification, xi_scale_defect, y_intertwine, Background, Depiction,
    Diff, FnSection, GaussPolySection, Pt, Section, TrigSection,
};
use crate::operator::TrigField;
use crate::spectral::{
    exclusion_report, hardy_suite, hemisphere_eig0, lambda_one_solutions, radial_admissible, radial_ode_solve,
    wronskian, Admissibility, ExclusionCase, ExclusionReport, HardyFamily, HardyReport, HemisphereEig,
    RadialODEState,
};
use crate::util::rng;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A stated formula disagrees with the computation while an independent
    /// derivation agrees; listed, but not a failure.
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The claim checked, or "plumbing".
    pub reference: String,
    pub status: Status,
    pub metric: f64,
    pub tolerance: f64,
    pub location: Option<String>,
}

/// The outcome of one suite. Wall time is kept out of the serialized form so
/// that reports are byte-identical across runs with the same seed.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Flagged)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Multiplies every nonzero default tolerance.
    pub tolerance_scale: f64,
    /// Random evaluation points per background in the operator suite.
    pub points: usize,
    /// Restricts the operator suite to one background.
    pub background: Option<Background>,
    /// Restricts the model suite to one m.
    pub model_m: Option<u32>,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, tolerance_scale: 1.0, points: 334, background: None, model_m: None, samples: 500 }
    }
}

pub const SUITES: [&str; 7] = ["algebra", "clifford", "model", "operator", "spectral", "flow-smoke", "all"];

struct Checks<'a> {
    prefix: &'a str,
    scale: f64,
    out: Vec<CheckResult>,
}

impl<'a> Checks<'a> {
    fn new(prefix: &'a str, scale: f64) -> Self {
        Checks { prefix, scale, out: Vec::new() }
    }

    fn push(&mut self, id: &str, reference: &str, status: Status, metric: f64, tolerance: f64, loc: Option<String>) {
        self.out.push(CheckResult {
            id: format!("{}/{}", self.prefix, id),
            reference: reference.into(),
            status,
            metric,
            tolerance,
            location: loc,
        });
    }

    /// Passes when metric ≤ tol·scale.
    fn le(&mut self, id: &str, reference: &str, metric: f64, tol: f64, loc: Option<String>) {
        let tol = tol * self.scale;
        let status = if metric <= tol { Status::Pass } else { Status::Fail };
        self.push(id, reference, status, metric, tol, loc);
    }

    /// Passes when |metric − target| ≤ tol·scale; the metric is reported raw.
    fn near(&mut self, id: &str, reference: &str, metric: f64, target: f64, tol: f64, loc: Option<String>) {
        let tol = tol * self.scale;
        let status = if (metric - target).abs() <= tol { Status::Pass } else { Status::Fail };
        self.push(id, reference, status, metric, tol, loc);
    }

    fn holds(&mut self, id: &str, reference: &str, ok: bool, loc: Option<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, reference, status, if ok { 0.0 } else { 1.0 }, 0.0, loc);
    }
}

/// Runs a named suite. Unknown names are an error.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        "algebra" => algebra_checks(opts),
        "clifford" => clifford_checks(opts),
        "model" => model_checks(opts)?,
        "operator" => operator_checks(opts)?,
        "spectral" => spectral_checks(opts)?,
        "flow-smoke" => flow_smoke_checks(opts)?,
        "all" => {
            let mut all = algebra_checks(opts);
            all.extend(clifford_checks(opts));
            all.extend(model_checks(opts)?);
            all.extend(operator_checks(opts)?);
            all.extend(spectral_checks(opts)?);
            all.extend(flow_smoke_checks(opts)?);
            all
        }
        other => return Err(Error::UnknownSuite(other.into())),
    };
    Ok(SuiteReport {
        suite: name.into(),
        seed: opts.seed,
        tolerance_scale: opts.tolerance_scale,
        checks,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn random_lie<R: Rng>(g: &mut R) -> LieElem {
    LieElem::from_coords(std::array::from_fn(|_| C64::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0))))
}

fn sigma(i: usize) -> LieElem {
    crate::algebra::basis_sigma(i).expect("index in range")
}

fn algebra_checks(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut c = Checks::new("algebra", opts.tolerance_scale);
    // |ab − target| entrywise, with target = sign·c (or sign·1 when c is None).
    let dist = |a: usize, b: usize, sign: f64, c: Option<usize>| {
        let p = sigma(a).matmul(&sigma(b));
        let t = c.map(|c| sigma(c).entries()).unwrap_or_else(identity2);
        (0..4).map(|e| (p[e / 2][e % 2] - t[e / 2][e % 2] * sign).norm()).fold(0.0, f64::max)
    };
    let mut table: f64 = 0.0;
    for i in 1..=3 {
        table = table.max(dist(i, i, -1.0, None));
    }
    table = table.max(dist(1, 2, -1.0, Some(3))).max(dist(2, 3, -1.0, Some(1))).max(dist(3, 1, -1.0, Some(2)));
    c.le("product_table", "sigma_i^2 = -1, sigma1 sigma2 = -sigma3 and cyclic", table, 1e-14, None);
    let mut ortho: f64 = 0.0;
    for i in 1..=3 {
        for j in 1..=3 {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((inner(&sigma(i), &sigma(j)) - want).norm());
        }
    }
    c.le("inner_orthonormal", "inner product -1/2 tr, orthonormal basis", ortho, 1e-14, None);
    let phi = l_plus_basis();
    c.le("phi_square_traceless", "phi = a1 - i a2 has square of trace zero", inner(&phi, &phi).norm(), 1e-14, None);
    c.le(
        "bracket_s1_s2",
        "plumbing",
        (bracket(&sigma(1), &sigma(2)) + sigma(3).scale_re(2.0)).max_abs(),
        1e-14,
        None,
    );
    let gen = l_generator();
    let eig = (bracket(&gen, &phi) - phi).max_abs().max((bracket(&gen, &l_minus_basis()) + l_minus_basis()).max_abs());
    c.le("l_plus_eigenvector", "[(i/2) sigma3, phi] = phi", eig, 1e-14, None);
    let mut g = rng(opts.seed);
    let (mut recon, mut abelian, mut inner_plus, mut star_ok, mut pos) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..1000 {
        let (u, v) = (random_lie(&mut g), random_lie(&mut g));
        let du = l_decompose(&u);
        recon = recon.max((du.reconstruct() - u).max_abs());
        let dv = l_decompose(&v);
        abelian = abelian.max(bracket(&du.plus, &dv.plus).max_abs());
        inner_plus = inner_plus.max(inner(&du.plus, &dv.plus).norm());
        let s = star(&du.plus);
        star_ok = star_ok.max(l_decompose(&s).plus.max_abs()).max((star(&s) - du.plus).max_abs());
        let w = u.su2_part().to_lie();
        let iw = inner(&w, &w);
        pos = pos.min(iw.re - 10.0 * iw.im.abs());
    }
    c.le("decompose_roundtrip", "sl(2,C) = L+ + C sigma3 + L-", recon, 1e-12, None);
    c.le("l_plus_abelian", "commutator of two elements of L+ is zero", abelian, 1e-12, None);
    c.le("l_plus_isotropic", "trace pairing vanishes on L+", inner_plus, 1e-12, None);
    c.le("star_exchanges", "conjugation identifies L+ with L-; star is an involution", star_ok, 1e-12, None);
    c.holds("inner_positive", "inner product positive on su(2)", pos > 0.0, None);
    c.out
}

fn spectrum_matches(spec: &[f64], allowed: &[f64], tol: f64) -> f64 {
    spec.iter().map(|v| allowed.iter().map(|a| (v - a).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        .max(if allowed.iter().all(|a| spec.iter().any(|v| (v - a).abs() <= tol)) { 0.0 } else { f64::INFINITY })
}

fn describe_clusters(spec: &[f64]) -> String {
    cluster(spec, 1e-8).iter().map(|(v, n)| format!("{v:.6}x{n}")).collect::<Vec<_>>().join(" ")
}

fn clifford_checks(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut c = Checks::new("clifford", opts.tolerance_scale);
    let cl = load_clifford();
    for r in cl.relation_checks() {
        c.holds(&r.name.replace(' ', "_"), "Clifford relations of the generators", r.holds, None);
    }
    for (t, allowed) in [(1.0, [-2.0, -1.0, 1.0, 2.0]), (2.0, [-1.0, -0.5, 0.5, 1.0])] {
        let e = nahm_pole_endo(&cl, t).expect("t > 0");
        let spec = e.symmetric_spectrum();
        c.le(
            &format!("nahm_pole_spectrum_t{t}"),
            "eigenvalues of {a, .} are +-1/t, +-2/t",
            spectrum_matches(&spec, &allowed.map(|a| a), 1e-10).max(e.symmetry_defect()),
            1e-10,
            Some(describe_clusters(&spec)),
        );
    }
    let d = derived_endos(&cl);
    let qs = d.q.antisymmetric_spectrum();
    c.le(
        "q_spectrum",
        "eigenvalues of Q are +-3i and +-i",
        spectrum_matches(&qs, &[-3.0, -1.0, 1.0, 3.0], 1e-10).max(d.q.antisymmetry_defect()),
        1e-10,
        Some(describe_clusters(&qs)),
    );
    c.le(
        "l_square",
        "L has square 1",
        (&(&d.l * &d.l) - &Endo24::identity()).max_abs().max(d.l.symmetry_defect()),
        0.0,
        None,
    );
    c.holds("y_square", "Y^2 = -1", d.y * d.y == -clifford::Mat8::identity(), None);
    c.le("q_l_commute", "Q and L commute", (&(&d.q * &d.l) - &(&d.l * &d.q)).max_abs(), 1e-12, None);
    let mut g = rng(opts.seed);
    let mut orth: f64 = 0.0;
    for _ in 0..100 {
        let (t, z1, z2) = (g.random_range(0.01..3.0), g.random_range(-3.0..3.0), g.random_range(-3.0..3.0));
        let u = u_matrix(&cl, t, z1, z2).expect("t > 0");
        for i in 0..8 {
            for j in 0..8 {
                let s: f64 = (0..8).map(|k| u[k][i] * u[k][j]).sum();
                orth = orth.max((s - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    c.le("u_orthogonal", "U^T U = 1", orth, 1e-14, None);
    c.out
}

/// The property map of one model solution.
pub fn model_properties(m: u32, samples: usize, seed: u64) -> Result<PropertyReport> {
    ModelSolution::new(m).verify_properties(samples, seed)
}

fn fmt_loc(p: &[f64]) -> String {
    let v: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", v.join(", "))
}

fn model_checks(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut c = Checks::new("model", opts.tolerance_scale);
    let ms_list: Vec<u32> = match opts.model_m {
        Some(m) => vec![m],
        None => (0..=3).collect(),
    };
    let pts = sample_points(200, opts.seed);
    for &m in &ms_list {
        let ms = ModelSolution::new(m);
        let r = richardson_sweep(&ms, &pts, 1e-4)?;
        c.le(
            &format!("m{m}/reduced_equations"),
            "the reduced equations hold for the model solutions",
            r.max_residual,
            1e-6,
            Some(fmt_loc(&r.worst_location)),
        );
        let worst = r.ratios().map(|x| (x - 4.0).abs()).fold(0.0, f64::max);
        c.le(&format!("m{m}/richardson_order"), "plumbing", worst, 0.5, None);
        let props = ms.verify_properties(opts.samples, opts.seed)?;
        for (name, res) in &props.0 {
            let reference = match name.as_str() {
                "alpha_range" => "alpha between -(m+1)/(2t) and -1/(2t)",
                "dalpha_dt_positive" => "d alpha / dt > 0",
                "phi_bound" | "phi_bound_strict" => "|phi| <= 1/(sqrt2 t), equality only for m = 0",
                "scaling_equivariance" => "fixed by coordinate rescaling",
                "sigma3_parallel" | "b1_b2_e3_zero" => "the connection is abelian, curvature along sigma3",
                "curvature_decay_constant" => "curvature bounded by C t / x^3",
                _ => "plumbing",
            };
            let status = if res.pass { Status::Pass } else { Status::Fail };
            c.push(
                &format!("m{m}/{name}"),
                reference,
                status,
                res.worst_violation,
                0.0,
                res.location.map(|l| fmt_loc(&l)),
            );
        }
        if m == 0 {
            let mut worst: f64 = 0.0;
            for p in pts.iter().take(100) {
                let ev = ms.evaluate(p)?;
                worst = worst.max(ev.b3.norm()).max(ev.e1.norm()).max(ev.e2.norm());
            }
            c.le("m0/curvature_vanishes", "m = 0 is the Nahm pole, A = 0", worst, 1e-12, None);
        } else {
            let p = crate::model::FieldPoint::new(0.9, 0.7, -0.4);
            let control = ms.b3_residual_without_phi_sq(&p, 1e-4)?;
            c.holds(&format!("m{m}/b3_negative_control"), "plumbing", control > 1e-3, Some(format!("{control:e}")));
            let (a, b) = (ms.case4_solution(m, &p, 1e-3)?, ms.case4_solution(m, &p, 5e-4)?);
            let ra = a.resid_t.max(a.resid_dbar);
            let rb = b.resid_t.max(b.resid_dbar);
            c.holds(
                &format!("m{m}/case4_residual_converges"),
                "sigma_- solves the L- equations",
                rb < 1e-4 && (rb < 1e-11 || ra / rb > 3.5),
                Some(format!("{ra:e} -> {rb:e}")),
            );
            c.near(&format!("m{m}/case4_exponent"), "|sigma_-| ~ x^(p+1)", a.exponent, m as f64 + 1.0, 1e-3, None);
        }
    }
    Ok(c.out)
}

fn operator_points<R: Rng>(g: &mut R, n: usize) -> Vec<Pt> {
    (0..n)
        .map(|_| {
            let t = g.random_range(0.5..2.0);
            let r = g.random_range(0.3..2.0);
            let a = g.random_range(0.0..TAU);
            [t, r * a.cos(), r * a.sin(), g.random_range(0.0..TAU)]
        })
        .collect()
}

fn operator_checks(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut c = Checks::new("operator", opts.tolerance_scale);
    let bgs = match &opts.background {
        Some(b) => vec![b.clone()],
        None => vec![Background::Trivial, Background::Nahm, Background::Model(ModelSolution::new(1))],
    };
    let cl = load_clifford();
    let q = clifford::q_endo(&cl);
    let d = Diff::new(1e-3, 4);
    for bg in &bgs {
        let name = bg.name();
        let mut g = rng(opts.seed);
        let pts = operator_points(&mut g, opts.points);
        let (mut dep, mut yi, mut sum, mut cov, mut oms, mut qc) = ((0.0f64, None), 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in &pts {
            let psi = GaussPolySection::random(&mut g, *p, 1.0);
            let e = depiction_disagreement(bg, &psi, p, &d)?;
            if e > dep.0 || dep.1.is_none() {
                dep = (dep.0.max(e), Some(*p));
            }
            yi = yi.max(y_intertwine(bg, &psi, p, &d)?);
            let dd = apply_d(bg, &psi, p, Depiction::Clifford, &d)? + apply_d_dagger(bg, &psi, p, &d)?
                - 2.0 * apply_l(bg, &psi, p, &d)?;
            sum = sum.max(dd.max_abs());
            cov = cov.max(xi_scale_defect(bg, &psi, p, 2.0, &d)?);
            let o1 = omega_apply(bg, &psi, p, &d)?;
            let pulled = FnSection(|x: &Pt| psi.eval(&x.map(|v| v / 2.0)));
            let o2 = omega_apply(bg, &pulled, &p.map(|v| v * 2.0), &d.scaled(2.0))?;
            oms = oms.max((o1 - o2).max_abs() / o1.max_abs().max(1.0));
            let qpsi = FnSection(|x: &Pt| Ok(psi.eval(x)?.apply24(&q)));
            qc = qc.max((o1.apply24(&q) - omega_apply(bg, &qpsi, p, &d)?).max_abs() / o1.max_abs().max(1.0));
        }
        let loc = dep.1.map(|p| fmt_loc(&p));
        c.le(&format!("{name}/depictions_agree"), "three forms of the linearized operator agree", dep.0, 1e-9, loc);
        c.le(&format!("{name}/y_intertwines"), "D Y = -Y D^dagger", yi, 1e-8, None);
        c.le(&format!("{name}/time_parts_cancel"), "D + D^dagger has no time derivative", sum, 1e-12, None);
        c.le(&format!("{name}/xi_covariance"), "Xi(phi_lambda^* psi) = lambda^-1 phi_lambda^*(Xi psi)", cov, 1e-8, None);
        c.le(&format!("{name}/omega_scale_invariant"), "Omega commutes with dilations", oms, 1e-8, None);
        c.le(&format!("{name}/omega_commutes_q"), "Q commutes with Omega", qc, 1e-8, None);
        if !matches!(bg, Background::Trivial) {
            for p in pts.iter().take(3) {
                let r = bochner_check(bg, p, 2e-3)?;
                let at = Some(fmt_loc(p));
                c.near(
                    &format!("{name}/bochner_expanded_order"),
                    "D^dagger D = nabla^dagger nabla + [a,[.,a]] + X, zeroth-order remainder",
                    r.ratio_derived,
                    4.0,
                    0.5,
                    at.clone(),
                );
                c.le(&format!("{name}/x_zero_rows"), "X does not see b3 and ct", r.printed_zero_rows, 0.0, at.clone());
                c.le(&format!("{name}/x_symmetric"), "X is symmetric", r.printed_symmetry_defect, 1e-10, at.clone());
                let blocks: Vec<String> = r.flagged_blocks.iter().map(|(i, j, e)| format!("({i},{j}):{e:.3e}")).collect();
                let status = if r.printed_matches() {
                    Status::Pass
                } else if r.derived_matches() {
                    Status::Flagged
                } else {
                    Status::Fail
                };
                c.push(
                    &format!("{name}/x_tabulated"),
                    "the tabulated X matches the Bochner remainder",
                    status,
                    r.resid_printed[1],
                    0.0,
                    Some(format!("{} blocks {}", fmt_loc(p), blocks.join(" "))),
                );
            }
        }
    }
    if opts.background.is_none() || opts.background == Some(Background::Trivial) {
        let mut g = rng(opts.seed ^ 0x5eed);
        let torus = Background::Torus(TrigField::random(&mut g, 2, 0.5));
        for (bg, tag) in [(Background::Trivial, "trivial"), (torus.clone(), "torus")] {
            let mut worst: f64 = 0.0;
            for p in operator_points(&mut g, 50) {
                let psi = TrigSection::random(&mut g, 2, 2, false);
                worst = worst.max(spatial_identification(&bg, &psi, &p, &d)?);
            }
            c.le(
                &format!("{tag}/spatial_identification"),
                "spatial part equals -(*d eta + d* v, d^dagger eta)",
                worst,
                1e-9,
                None,
            );
        }
        let psi = TrigSection::random(&mut g, 1, 1, true);
        let xi = TrigSection::random(&mut g, 1, 1, true);
        c.le("torus/duality", "D^dagger is the formal adjoint of D", duality_defect(&torus, &psi, &xi, 8, &d)?, 1e-12, None);
        c.le(
            "torus/pythagoras",
            "|D psi|^2 = |nabla_t psi|^2 + |L psi|^2 for t-independent backgrounds",
            pythagoras_defect(&torus, &psi, 8, &d)?,
            1e-12,
            None,
        );
        let mut worst: f64 = 0.0;
        for ms in lattice_l_spectrum(2) {
            let kn = (ms.k.iter().map(|v| (v * v) as f64).sum::<f64>()).sqrt();
            let want: Vec<(f64, usize)> = if kn == 0.0 { vec![(0.0, 24)] } else { vec![(-kn, 12), (kn, 12)] };
            let ok = ms.eigen.len() == want.len()
                && ms.eigen.iter().zip(&want).all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= 1e-10);
            if !ok {
                worst = f64::INFINITY;
            }
        }
        c.le("trivial/lattice_spectrum", "symbol eigenvalues +-|k|, 12 each", worst, 0.0, None);
    }
    Ok(c.out)
}

fn spectral_checks(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut c = Checks::new("spectral", opts.tolerance_scale);
    let h = hemisphere_eig0(2000)?;
    c.near("hemisphere_eigenvalue", "lowest Dirichlet eigenvalue on the hemisphere is 2", h.eigenvalue, 2.0, 1e-3, None);
    c.le("hemisphere_eigenfunction", "eigenfunction cos theta", h.distance_to_cos, 1e-2, None);
    let hr = hardy_suite(&HardyFamily::default())?;
    for e in &hr.entries {
        let tag = format!("hardy/{}/{}", e.inequality.name(), e.member.replace(' ', "_"));
        c.le(&tag, "Hardy inequality with its constant", e.ratio, e.constant, None);
    }
    c.holds(
        "hardy/near_extremal",
        "constant 4 is sharp",
        hr.near_extremal_sup >= 3.5 && hr.near_extremal_sup <= 4.0,
        Some(format!("sup {:.4}", hr.near_extremal_sup)),
    );
    for case in [ExclusionCase::B3Ct, ExclusionCase::Case2 { m: 1 }, ExclusionCase::Case3 { m: 1 }] {
        let r = exclusion_report(case)?;
        let tag = r.case.replace(['(', ')', '='], "");
        match case {
            ExclusionCase::B3Ct => c.near("exclusion/b3ct_mu", "Rayleigh bound 2", r.mu_min, 2.0, 5e-3, None),
            ExclusionCase::Case3 { .. } => c.le(
                "exclusion/case3m1_mu",
                "lambda^2 + lambda > 2 + (m+1)^2",
                6.0 - r.mu_min,
                5e-3,
                Some(format!("mu {:.5}", r.mu_min)),
            ),
            _ => {}
        }
        c.holds(
            &format!("exclusion/{tag}/covers"),
            "no admissible lambda in [0, 3/2]",
            r.covers_zero_to_three_halves && r.covers_one_half,
            Some(format!("[{:.4}, {:.4}]", r.excluded.0, r.excluded.1)),
        );
    }
    // λ² + λ = 6 has roots −3 and 2, so the stated −7/2 does not follow.
    c.push(
        "exclusion/case3m1_lower_root",
        "stated consequence: lambda < -7/2 or lambda > 3/2",
        Status::Flagged,
        -3.0,
        0.0,
        Some("roots of lambda^2 + lambda = 6 are -3 and 2".into()),
    );
    let mut closed: f64 = 0.0;
    let mut wr: f64 = 0.0;
    for k in [0.5, 1.0, 2.0] {
        let [d0, _] = lambda_one_solutions(k, 20.0 / k);
        let dec = radial_ode_solve(1.0, k, (20.0 / k, 0.05 / k), d0)?;
        closed = closed.max(dec.max_rel_error(|x| lambda_one_solutions(k, x)[0]));
        let [_, g0] = lambda_one_solutions(k, 0.05 / k);
        let gro = radial_ode_solve(1.0, k, (0.05 / k, 20.0 / k), g0)?;
        closed = closed.max(gro.max_rel_error(|x| lambda_one_solutions(k, x)[1]));
        for x in [0.1, 1.0, 5.0] {
            let [s1, s2] = lambda_one_solutions(k, x);
            wr = wr.max((wronskian(x, s1, s2) - 2.0).abs());
        }
    }
    c.le("radial/lambda_one_closed_forms", "closed-form solutions at lambda = 1", closed, 1e-8, None);
    c.le("radial/wronskian", "plumbing", wr, 1e-12, None);
    for (lam, want) in [(1.0, true), (0.0, false), (2.0, false), (0.6, true), (1.4, true)] {
        let a = radial_admissible(lam, 1.0)?;
        c.holds(
            &format!("radial/admissible_lambda{lam}"),
            "admissible exactly for 1/2 < lambda < 3/2",
            a.admissible == want,
            Some(format!("exponent {:.4}", a.exponent_at_zero)),
        );
    }
    Ok(c.out)
}

fn flow_smoke_checks(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut c = Checks::new("flow-smoke", opts.tolerance_scale);
    let n = 8;
    let zero = TorusField::zeros(n, TAU);
    let tr = run_flow(&zero, &FlowParams { dt: 0.1 * zero.h(), steps: 10 })?;
    let drift = tr.cs.iter().chain(&tr.grad_norm_sq).fold(0.0f64, |m, v| m.max(v.abs()));
    c.le("zero_is_stationary", "the trivial pair is a fixed point", drift, 0.0, None);
    match run_flow(&zero, &FlowParams { dt: zero.h(), steps: 1 }) {
        Err(Error::Cfl { .. }) => c.holds("cfl_rejection", "plumbing", true, None),
        _ => c.holds("cfl_rejection", "plumbing", false, None),
    }
    let f = TorusField::random(n, TAU, 0.5, 1, 3, opts.seed);
    let mut worst: f64 = 0.0;
    let mut order: f64 = 0.0;
    for s in 0..3 {
        let dir = TorusField::random(n, TAU, 1.0, 1, 3, opts.seed.wrapping_add(100 + s));
        let gc = gradient_check(&f, &dir, &[1e-3, 5e-4, 2.5e-4, 1e-4]);
        worst = worst.max(gc.errors.last().map(|e| e.1).unwrap_or(f64::NAN));
        order = order.max((gc.orders[0] - 2.0).abs());
    }
    c.le("gradient_check", "derivative of cs along (b, c) is the pairing with grad f", worst, 1e-6, None);
    c.le("gradient_check_order", "plumbing", order, 0.1, None);
    let eps = 0.05;
    let ab = TorusField::abelian(n, TAU, eps);
    let kh = flow::fd4_symbol(1.0, ab.h());
    let want = -eps * eps * kh * TAU.powi(3);
    c.le("abelian_cs", "plumbing", (flow::cs_functional(&ab) - want).abs() / want.abs(), 1e-12, None);
    let (a16, a32) = (gauge_defect(16, opts.seed), gauge_defect(32, opts.seed));
    c.near(
        "gauge_invariance_order",
        "cs is gauge invariant; the discrete defect vanishes at the stencil order",
        (a16 / a32).log2(),
        4.0,
        0.5,
        Some(format!("defect N=16 {a16:e}, N=32 {a32:e}")),
    );
    let small = TorusField::random(n, TAU, 1e-3, 1, 3, opts.seed);
    let tr = run_flow(&small, &FlowParams { dt: 0.05 * small.h(), steps: 60 })?;
    c.holds("monotone", "cs is non-decreasing along the flow", tr.monotone() && tr.completed(), None);
    c.le("energy_identity", "d cs/dt = integral of |E|^2 + |nabla_t a|^2", tr.max_energy_relerr(), 1e-3, None);
    c.le("two_forms", "the two expressions for d cs/dt agree", tr.max_two_forms_relerr(), 1e-3, None);
    let m = ModeVector::eigen_mode(2, [1, 0, 0], 1.0, opts.seed);
    let dt = flow::linearized_decay(2, &m, 3.0, 0.1)?;
    let single = dt.times.iter().zip(&dt.f_plus).map(|(t, f)| (f / dt.f_plus[0] - (-t).exp()).abs()).fold(0.0, f64::max);
    c.le("linear_single_mode", "f+ decays at rate lambda", single, 1e-8, None);
    let mixed = flow::linearized_decay(2, &ModeVector::random(2, opts.seed), 3.0, 0.1)?;
    c.le("linear_mixed_rate", "f+ decays at rate at least lambda_1 = 1", 1.0 - mixed.min_plus_rate(), 1e-9, None);
    let phi = ModeVector::h1(2, [[0.1, 0.0, 0.0], [0.0, 0.2, 0.0], [0.0, 0.0, 0.1]], [[0.0, 0.1, 0.0], [0.05, 0.0, 0.0], [0.0, 0.0, 0.1]]);
    let k = kuranishi_w(&phi, 1e-12)?;
    c.le("kuranishi_residual", "(1 - Pi0) F(phi + w) = 0", k.residual, 1e-10, None);
    c.le("kuranishi_bound", "|w| <= kappa |phi|^2", k.w_norm, k.kappa * k.phi_norm.powi(2) + 1e-15, None);
    Ok(c.out)
}

/// |cs(g·F) − cs(F)| for a fixed small gauge transformation on the N-grid.
pub fn gauge_defect(n: usize, seed: u64) -> f64 {
    let f = TorusField::random(n, TAU, 0.5, 1, 3, seed);
    let g = gauge_transform(&f, crate::algebra::Su2([1.0, 2.0, 0.5]), &[([1, 0, 0], 0.3, 1.0), ([0, 1, 1], 1.0, 0.5)], 0.05);
    (flow::cs_functional(&f) - flow::cs_functional(&g)).abs()
}

/// Summary written next to trace.csv by `flow run`.
#[derive(Clone, Debug, Serialize)]
pub struct FlowSummary {
    pub config: FlowConfig,
    pub status: FlowStatus,
    pub steps_completed: usize,
    pub monotone: bool,
    pub monotonicity_violations: usize,
    pub energy_identity_max_relerr: f64,
    pub two_forms_max_relerr: f64,
    pub initial_constraint: f64,
    pub constraint_drift_max: f64,
    pub cs_initial: f64,
    pub cs_final: f64,
    pub lojasiewicz: FitBlock,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum FitBlock {
    Fit(LojasiewiczFit),
    Declined { declined: String },
}

pub fn flow_summary(config: &FlowConfig, tr: &FlowTrace) -> FlowSummary {
    let lojasiewicz = match lojasiewicz_fit(&tr.times, &tr.cs, &tr.grad_norm_sq) {
        Ok(f) => FitBlock::Fit(f),
        Err(e) => FitBlock::Declined { declined: e.to_string() },
    };
    FlowSummary {
        config: config.clone(),
        status: tr.status.unwrap_or(FlowStatus::Completed),
        steps_completed: tr.steps.last().copied().unwrap_or(0),
        monotone: tr.monotone(),
        monotonicity_violations: tr.monotonicity_violations.len(),
        energy_identity_max_relerr: tr.max_energy_relerr(),
        two_forms_max_relerr: tr.max_two_forms_relerr(),
        initial_constraint: tr.initial_constraint,
        constraint_drift_max: tr.constraint_drift.iter().fold(0.0, |m, v| m.max(*v)),
        cs_initial: tr.cs.first().copied().unwrap_or(0.0),
        cs_final: tr.cs.last().copied().unwrap_or(0.0),
        lojasiewicz,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the trace in the fixed column order.
pub fn write_trace_csv<W: Write>(tr: &FlowTrace, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(["step", "time", "cs", "grad_norm_sq", "energy_identity_relerr", "constraint_drift", "sup_a"])
        .map_err(io)?;
    for i in 0..tr.steps.len() {
        out.write_record([
            tr.steps[i].to_string(),
            tr.times[i].to_string(),
            tr.cs[i].to_string(),
            tr.grad_norm_sq[i].to_string(),
            opt(tr.energy_identity_relerr[i]),
            tr.constraint_drift[i].to_string(),
            tr.sup_a[i].to_string(),
        ])
        .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs the flow described by `config`, writing trace.csv and summary.json
/// into `out_dir`.
pub fn flow_cmd(config: &FlowConfig, out_dir: &Path) -> Result<FlowSummary> {
    let f0 = config.initial_field();
    let tr = run_flow(&f0, &config.params())?;
    std::fs::create_dir_all(out_dir)?;
    write_trace_csv(&tr, create(&out_dir.join("trace.csv"))?)?;
    let summary = flow_summary(config, &tr);
    write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Hardy ratios to hardy.csv and the report to hardy.json.
pub fn spectral_hardy_cmd(out_dir: &Path) -> Result<HardyReport> {
    let r = hardy_suite(&HardyFamily::default())?;
    std::fs::create_dir_all(out_dir)?;
    let mut w = csv::Writer::from_writer(create(&out_dir.join("hardy.csv"))?);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["inequality", "member", "lhs", "rhs", "ratio", "constant"]).map_err(io)?;
    for e in &r.entries {
        w.write_record([
            e.inequality.name().to_string(),
            e.member.clone(),
            e.lhs.to_string(),
            e.rhs.to_string(),
            e.ratio.to_string(),
            e.constant.to_string(),
        ])
        .map_err(io)?;
    }
    for (eps, ratio) in &r.near_extremal {
        w.write_record(["half_line".into(), format!("near_extremal eps={eps}"), String::new(), String::new(), ratio.to_string(), "4".into()])
            .map_err(io)?;
    }
    w.flush()?;
    write_json(&out_dir.join("hardy.json"), &r)?;
    Ok(r)
}

/// The hemisphere eigenfunction to hemisphere.csv, summary to hemisphere.json.
pub fn spectral_hemisphere_cmd(n_mesh: usize, out_dir: &Path) -> Result<HemisphereEig> {
    let h = hemisphere_eig0(n_mesh)?;
    std::fs::create_dir_all(out_dir)?;
    let mut w = csv::Writer::from_writer(create(&out_dir.join("hemisphere.csv"))?);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["theta", "eigenfunction"]).map_err(io)?;
    for (t, f) in h.theta.iter().zip(&h.eigenfunction) {
        w.write_record([t.to_string(), f.to_string()]).map_err(io)?;
    }
    w.flush()?;
    #[derive(Serialize)]
    struct Summary {
        n_mesh: usize,
        eigenvalue: f64,
        second: f64,
        distance_to_cos: f64,
    }
    write_json(
        &out_dir.join("hemisphere.json"),
        &Summary { n_mesh, eigenvalue: h.eigenvalue, second: h.second, distance_to_cos: h.distance_to_cos },
    )?;
    Ok(h)
}

/// One exclusion row to exclusion.csv and the report to exclusion.json.
pub fn spectral_exclusion_cmd(case: ExclusionCase, out_dir: &Path) -> Result<ExclusionReport> {
    let r = exclusion_report(case)?;
    std::fs::create_dir_all(out_dir)?;
    let mut w = csv::Writer::from_writer(create(&out_dir.join("exclusion.csv"))?);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["case", "mu_min", "form", "excluded_lo", "excluded_hi"]).map_err(io)?;
    w.write_record([r.case.clone(), r.mu_min.to_string(), r.form.clone(), r.excluded.0.to_string(), r.excluded.1.to_string()])
        .map_err(io)?;
    w.flush()?;
    write_json(&out_dir.join("exclusion.json"), &r)?;
    Ok(r)
}

/// Output of `spectral ode`: the admissibility verdict and the inward trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct OdeOutput {
    pub admissibility: Admissibility,
    #[serde(skip)]
    pub trajectory: RadialODEState,
}

/// The inward trajectory to ode.csv and the verdict to ode.json.
pub fn spectral_ode_cmd(lambda: f64, k: f64, out_dir: &Path) -> Result<OdeOutput> {
    let admissibility = radial_admissible(lambda, k)?;
    let x0 = 30.0 / k.abs();
    let trajectory = radial_ode_solve(lambda, k, (x0, 1e-6), (1.0, -k.signum()))?;
    std::fs::create_dir_all(out_dir)?;
    let mut w = csv::Writer::from_writer(create(&out_dir.join("ode.csv"))?);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["x", "a", "b"]).map_err(io)?;
    for i in 0..trajectory.x_grid.len() {
        w.write_record([trajectory.x_grid[i].to_string(), trajectory.a[i].to_string(), trajectory.b[i].to_string()])
            .map_err(io)?;
    }
    w.flush()?;
    write_json(&out_dir.join("ode.json"), &admissibility)?;
    Ok(OdeOutput { admissibility, trajectory })
}

