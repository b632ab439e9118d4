//! Executes scenarios against the core modules and assembles report records.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use robertson_core::boxlab::{
    apply_momentum, apply_position, canonical_uncertainty_report, commutator_expectation_canonical,
    dirichlet_ground_state, domain_check, eigenfunction, eigenvalue, xm_commutator_expectation,
    xm_commutator_pairing, xm_uncertainty_report, BoxInterval, BoxUncertaintyReport, BoxWavefunction,
    CanonicalCommutator, ClosedForm, MomentumExtension,
};
use robertson_core::linalg::{from_rows, norm_inf};
use robertson_core::observable::{
    expectation, robertson_report, variance_radicand, HermitianOperator, StateVector,
};
use robertson_core::pt::{
    find_non_universality_pairs, is_cpt_observable, is_pt_symmetric, random_unbroken_model, verify_c,
    ParityMatrix, Phase, PtModel, TwoLevelParams,
};
use robertson_core::tol::{self, EPS_PT, EPS_QUAD, EPS_ZERO};
use robertson_core::zero_bound::{
    classify_family, default_samples, evaluate_objective, gellmann_bound_closed_form,
    minimize_objective, pauli_bound_closed_form, GeneratorCatalog,
};
use robertson_core::{CMatrix, CVector, Complex64};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{Check, Report, ReportRecord};
use crate::scenario::{
    BoxParams, BoxProbe, BoxState, Expectations, Limits, FamilyScanParams, FiniteDimParams, ModelSpec,
    NamedObservable, OperatorSpec, Parameters, PtModelParams, PtNonUniversalityParams, ScenarioConfig,
    ScenarioKind, SchemaError, SearchParams,
};

/// Tolerance for `expect` entries that do not set one.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("scenario '{scenario}': {message}")]
    Module { scenario: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

type Result<T> = std::result::Result<T, RunError>;

fn module_err(scenario: &str, e: impl std::fmt::Display) -> RunError {
    RunError::Module {
        scenario: scenario.to_string(),
        message: e.to_string(),
    }
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_list(v: impl IntoIterator<Item = Complex64>) -> Value {
    Value::Array(v.into_iter().map(complex).collect())
}

fn matrix_rows(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| complex_list((0..m.ncols()).map(|j| m[(i, j)])))
            .collect(),
    )
}

/// Builds a matrix from `[re, im]` rows, rejecting empty or ragged input.
fn matrix_from_rows(id: &str, rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(module_err(id, "matrix rows must be nonempty and of equal length"));
    }
    let pairs: Vec<Vec<(f64, f64)>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| (re, im)).collect())
        .collect();
    Ok(from_rows(&pairs))
}

/// Collects outputs and checks for one record.
struct RecordBuilder {
    scenario_id: String,
    module: &'static str,
    operation: String,
    inputs: Value,
    outputs: BTreeMap<String, Value>,
    notes: Vec<String>,
    checks: Vec<Check>,
    start: Instant,
}

impl RecordBuilder {
    fn new(scenario_id: &str, module: &'static str, operation: &str, inputs: Value) -> Self {
        Self {
            scenario_id: scenario_id.to_string(),
            module,
            operation: operation.to_string(),
            inputs,
            outputs: BTreeMap::new(),
            notes: Vec::new(),
            checks: Vec::new(),
            start: Instant::now(),
        }
    }

    fn out(&mut self, key: &str, value: impl Serialize) {
        self.outputs.insert(key.to_string(), to_value(value));
    }

    fn check_le(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value: to_value(value),
            expected: to_value(limit),
            comparison: "le".into(),
            tolerance: None,
            passed: value <= limit,
        });
    }

    fn check_ge(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value: to_value(value),
            expected: to_value(limit),
            comparison: "ge".into(),
            tolerance: None,
            passed: value >= limit,
        });
    }

    fn check_true(&mut self, name: &str, value: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            value: Value::Bool(value),
            expected: Value::Bool(true),
            comparison: "eq".into(),
            tolerance: None,
            passed: value,
        });
    }

    /// Compares the declared expectations with the outputs of the same name.
    fn expect(&mut self, expect: &Expectations, tolerance: Option<f64>) {
        let tol = tolerance.unwrap_or(DEFAULT_TOLERANCE);
        for (key, expected) in expect {
            let value = self.outputs.get(key).cloned().unwrap_or(Value::Null);
            let numeric = contains_number(expected);
            self.checks.push(Check {
                name: key.clone(),
                passed: matches(&value, expected, tol),
                value,
                expected: expected.clone(),
                comparison: if numeric { "approx" } else { "eq" }.into(),
                tolerance: numeric.then_some(tol),
            });
        }
    }

    /// One-sided checks on numeric outputs; a missing or non-numeric output fails.
    fn limits(&mut self, at_least: &Limits, at_most: &Limits) {
        for (key, &limit) in at_least {
            let v = self.outputs.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN);
            self.check_ge(key, v, limit);
        }
        for (key, &limit) in at_most {
            let v = self.outputs.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN);
            self.check_le(key, v, limit);
        }
    }

    fn finish(self) -> ReportRecord {
        ReportRecord {
            scenario_id: self.scenario_id,
            module: self.module.to_string(),
            operation: self.operation,
            inputs: self.inputs,
            outputs: self.outputs,
            notes: self.notes,
            checks: self.checks,
            wall_time_ms: self.start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn contains_number(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Array(a) => a.iter().any(contains_number),
        Value::Object(o) => o.values().any(contains_number),
        _ => false,
    }
}

/// Numbers match within `tol`; arrays and objects match elementwise; anything
/// else must be equal.
pub fn matches(value: &Value, expected: &Value, tol: f64) -> bool {
    match (value, expected) {
        (Value::Number(v), Value::Number(e)) => match (v.as_f64(), e.as_f64()) {
            (Some(v), Some(e)) => (v - e).abs() <= tol,
            _ => false,
        },
        (Value::Array(v), Value::Array(e)) => {
            v.len() == e.len() && v.iter().zip(e).all(|(v, e)| matches(v, e, tol))
        }
        (Value::Object(v), Value::Object(e)) => {
            v.len() == e.len()
                && e.iter()
                    .all(|(k, e)| v.get(k).is_some_and(|v| matches(v, e, tol)))
        }
        _ => value == expected,
    }
}

/// Runs one scenario. `seed_override` replaces the scenario's own seed.
pub fn run_scenario(config: &ScenarioConfig, seed_override: Option<u64>) -> Result<Vec<ReportRecord>> {
    let params = config.typed_parameters()?;
    let seed = seed_override.or(config.seed);
    let id = config.scenario_id.as_str();
    log::info!("running scenario {id} ({})", config.kind.name());
    let need_seed = || seed.ok_or_else(|| SchemaError::MissingSeed(id.to_string()));
    match params {
        Parameters::FiniteDim(p) => run_finite_dim(id, &config.parameters, &p).map(|r| vec![r]),
        Parameters::FamilyScan(p) => {
            run_family_scan(id, &config.parameters, &p, need_seed()?).map(|r| vec![r])
        }
        Parameters::Search(p) => run_search(id, &config.parameters, &p, need_seed()?).map(|r| vec![r]),
        Parameters::Box(p) => {
            let standard = config.kind == ScenarioKind::BoxStandard;
            run_box(id, &p, standard)
        }
        Parameters::PtModel(p) => run_pt_model(id, &config.parameters, &p, seed).map(|r| vec![r]),
        Parameters::PtNonUniversality(p) => run_pt_non_universality(id, &p, need_seed()?),
    }
}

/// Runs every scenario in order and aggregates the records.
pub fn run_batch(configs: &[ScenarioConfig], seed_override: Option<u64>) -> Result<Report> {
    crate::scenario::validate_all(configs)?;
    let mut records = Vec::new();
    for c in configs {
        records.extend(run_scenario(c, seed_override)?);
    }
    Ok(Report::new(configs.len(), records))
}

fn operator(id: &str, spec: &OperatorSpec) -> Result<(String, HermitianOperator)> {
    match spec {
        OperatorSpec::Named(name) => GeneratorCatalog::new()
            .by_name(name)
            .cloned()
            .map(|op| (name.clone(), op))
            .ok_or_else(|| {
                module_err(
                    id,
                    format!("unknown operator '{name}', expected one of {:?}", GeneratorCatalog::NAMES),
                )
            }),
        OperatorSpec::Matrix(m) => {
            let entries = matrix_from_rows(id, &m.rows)?;
            let op = HermitianOperator::new(entries).map_err(|e| module_err(id, e))?;
            Ok(("matrix".to_string(), op))
        }
    }
}

fn operator_pair(
    id: &str,
    a: &OperatorSpec,
    b: &OperatorSpec,
) -> Result<((String, HermitianOperator), (String, HermitianOperator))> {
    Ok((operator(id, a)?, operator(id, b)?))
}

fn state_json(s: &StateVector) -> Value {
    complex_list(s.amplitudes().iter().copied())
}

/// Closed-form bound when `(a, b)` is `(σ_x, σ_y)` or `(λ_3, λ_4)` in either order.
fn closed_form_bound(a: &str, b: &str, amps: &CVector) -> Option<f64> {
    let pair = |x: &str, y: &str| (a == x && b == y) || (a == y && b == x);
    if pair("sigma_x", "sigma_y") {
        pauli_bound_closed_form(amps[0], amps[1]).ok()
    } else if pair("lambda_3", "lambda_4") {
        gellmann_bound_closed_form(amps[0], amps[1], amps[2]).ok()
    } else {
        None
    }
}

fn run_finite_dim(id: &str, inputs: &Value, p: &FiniteDimParams) -> Result<ReportRecord> {
    let ((na, a), (nb, b)) = operator_pair(id, &p.a, &p.b)?;
    let mut rec = RecordBuilder::new(id, "observable-core", "robertson_report", inputs.clone());
    let amps = CVector::from_iterator(p.state.len(), p.state.iter().map(|&[re, im]| Complex64::new(re, im)));
    let state = if p.normalize {
        StateVector::normalized(amps)
    } else {
        StateVector::new(amps)
    }
    .map_err(|e| module_err(id, e))?;
    let r = robertson_report(&a, &b, &state).map_err(|e| module_err(id, e))?;
    let mean_a = expectation(&a, &state).map_err(|e| module_err(id, e))?;
    let mean_b = expectation(&b, &state).map_err(|e| module_err(id, e))?;
    rec.out("state", state_json(&state));
    rec.out("delta_a", r.delta_a);
    rec.out("delta_b", r.delta_b);
    if na != nb {
        if na != "matrix" {
            rec.out(&format!("delta_{na}"), r.delta_a);
        }
        if nb != "matrix" {
            rec.out(&format!("delta_{nb}"), r.delta_b);
        }
    }
    rec.out("expectation_a", mean_a);
    rec.out("expectation_b", mean_b);
    rec.out("product", r.product);
    rec.out("bound", r.bound);
    rec.out("gap", r.gap);
    rec.out("bound_is_zero", r.bound_is_zero);
    rec.out("a_eigenstate", r.a_eigenstate);
    rec.out("b_eigenstate", r.b_eigenstate);
    rec.out("sum_of_squares", r.sum_of_squares);
    rec.check_ge("robertson_floor", r.gap, -tol::eps_rob(r.product));
    for (label, op, delta) in [("a", &a, r.delta_a), ("b", &b, r.delta_b)] {
        let radicand = variance_radicand(op, &state).map_err(|e| module_err(id, e))?;
        let scale = op.norm_inf().powi(2);
        rec.check_le(
            &format!("radicand_agreement_{label}"),
            (radicand - delta * delta).abs(),
            tol::eps_rob(scale),
        );
    }
    if let Some(cf) = closed_form_bound(&na, &nb, state.amplitudes()) {
        rec.out("closed_form_bound", cf);
        rec.check_le("closed_form_agreement", (cf - r.bound).abs(), 1e-12);
    }
    rec.expect(&p.expect, p.tolerance);
    rec.limits(&p.at_least, &p.at_most);
    Ok(rec.finish())
}

fn run_family_scan(id: &str, inputs: &Value, p: &FamilyScanParams, seed: u64) -> Result<ReportRecord> {
    let ((_, a), (_, b)) = operator_pair(id, &p.a, &p.b)?;
    let mut rec = RecordBuilder::new(id, "zero-bound-explorer", "classify_family", inputs.clone());
    let samples = p.samples.unwrap_or_else(|| default_samples(&p.family));
    let v = classify_family(&p.family, &a, &b, samples, seed).map_err(|e| module_err(id, e))?;
    let mut min_bound = f64::INFINITY;
    for s in v.witness_states.iter().chain(&v.counter_states) {
        let r = robertson_report(&a, &b, s).map_err(|e| module_err(id, e))?;
        min_bound = min_bound.min(r.bound);
    }
    rec.out("family_descriptor", &v.family_descriptor);
    rec.out("seed", seed);
    rec.out("samples", v.samples);
    rec.out("bound_zero_on_family", v.bound_zero_on_family);
    rec.out("witness_count", v.witness_states.len());
    rec.out("counter_count", v.counter_states.len());
    rec.out("max_bound", v.max_bound);
    rec.out("min_bound", min_bound);
    if let Some(s) = v.witness_states.first() {
        rec.out("first_witness", state_json(s));
    }
    if let Some(s) = v.counter_states.first() {
        rec.out("first_counter", state_json(s));
    }
    rec.check_true(
        "sample_accounting",
        v.witness_states.len() + v.counter_states.len() == v.samples,
    );
    rec.check_true(
        "verdict_consistency",
        v.bound_zero_on_family == (v.max_bound <= EPS_ZERO),
    );
    rec.notes.extend(v.notes);
    rec.expect(&p.expect, p.tolerance);
    rec.limits(&p.at_least, &p.at_most);
    Ok(rec.finish())
}

fn run_search(id: &str, inputs: &Value, p: &SearchParams, seed: u64) -> Result<ReportRecord> {
    let ((_, a), (_, b)) = operator_pair(id, &p.a, &p.b)?;
    let mut rec = RecordBuilder::new(id, "zero-bound-explorer", "minimize_objective", inputs.clone());
    let res = minimize_objective(&a, &b, p.objective, seed, p.restarts).map_err(|e| module_err(id, e))?;
    let again =
        evaluate_objective(&a, &b, p.objective, &res.best_state).map_err(|e| module_err(id, e))?;
    let r = robertson_report(&a, &b, &res.best_state).map_err(|e| module_err(id, e))?;
    rec.out("objective", p.objective);
    rec.out("seed", seed);
    rec.out("best_value", res.best_value);
    rec.out("best_state", state_json(&res.best_state));
    rec.out("iterations", res.iterations);
    rec.out("product", r.product);
    rec.out("bound", r.bound);
    rec.out("gap", r.gap);
    rec.check_le("reevaluation", (again - res.best_value).abs(), 1e-12);
    rec.check_ge("robertson_floor", r.gap, -tol::eps_rob(r.product));
    rec.expect(&p.expect, p.tolerance);
    rec.limits(&p.at_least, &p.at_most);
    Ok(rec.finish())
}

fn box_state(id: &str, state: &BoxState, ext: &MomentumExtension) -> Result<BoxWavefunction> {
    let interval = ext.interval();
    Ok(match state {
        BoxState::Eigenfunction { n } => eigenfunction(ext, *n),
        BoxState::DirichletGround => dirichlet_ground_state(interval),
        BoxState::PlaneWave { amplitude, k } => BoxWavefunction::from_closed_form(
            interval,
            ClosedForm::plane_wave(
                format!("plane_wave(k={k})"),
                Complex64::new(amplitude[0], amplitude[1]),
                *k,
            ),
        ),
        BoxState::Trig { amplitude, k, phase } => {
            if *amplitude == 0.0 {
                return Err(module_err(id, "trig state needs a nonzero amplitude"));
            }
            BoxWavefunction::from_closed_form(interval, ClosedForm::trig(*amplitude, *k, *phase))
        }
    })
}

fn box_report_outputs(rec: &mut RecordBuilder, r: BoxUncertaintyReport) {
    rec.out("delta_x", r.delta_x);
    rec.out("delta_p", r.delta_p);
    rec.out("product", r.product);
    rec.out("commutator_defined", r.commutator_defined);
    rec.out("bound", r.bound);
    rec.out("bound_formula", r.bound_formula);
    if let Some(bound) = r.bound {
        rec.check_ge("bound_holds", r.product, bound - EPS_QUAD);
    }
    rec.notes.extend(r.notes);
}

fn run_box(id: &str, p: &BoxParams, standard: bool) -> Result<Vec<ReportRecord>> {
    let interval = if standard {
        BoxInterval::standard(p.length)
    } else {
        BoxInterval::symmetric(p.length)
    }
    .map_err(|e| module_err(id, e))?;
    let mut records = Vec::with_capacity(p.probes.len());
    for probe in &p.probes {
        let (theta, expect, tolerance, at_least, at_most) = match probe {
            BoxProbe::Eigenpair { theta, expect, tolerance, at_least, at_most, .. }
            | BoxProbe::DomainCheckPosition { theta, expect, tolerance, at_least, at_most, .. }
            | BoxProbe::CanonicalCommutator { theta, expect, tolerance, at_least, at_most, .. }
            | BoxProbe::XmCommutator { theta, expect, tolerance, at_least, at_most, .. }
            | BoxProbe::XmReport { theta, expect, tolerance, at_least, at_most, .. }
            | BoxProbe::CanonicalReport { theta, expect, tolerance, at_least, at_most, .. } => (theta, expect, tolerance, at_least, at_most),
        };
        let theta = theta.unwrap_or(p.theta);
        let ext = MomentumExtension::new(theta, interval, p.hbar).map_err(|e| module_err(id, e))?;
        let inputs = json!({
            "variant": interval.variant(),
            "length": p.length,
            "hbar": p.hbar,
            "theta": theta,
            "probe": probe,
        });
        let err = |e: robertson_core::boxlab::BoxError| module_err(id, e);
        let rec = match probe {
            BoxProbe::Eigenpair { n, .. } => {
                let mut rec = RecordBuilder::new(id, "boxlab", "eigenpair", inputs);
                let u = eigenfunction(&ext, *n);
                let p_n = eigenvalue(&ext, *n);
                let pu = apply_momentum(&u, &ext).map_err(err)?;
                let residual = pu.add_scaled(Complex64::new(-p_n, 0.0), &u).map_err(err)?.norm();
                let rayleigh = u.inner_product(&pu).map_err(err)?;
                let delta_p = pu.add_scaled(-rayleigh, &u).map_err(err)?.norm();
                rec.out("n", n);
                rec.out("eigenvalue", p_n);
                rec.out("rayleigh_quotient", rayleigh.re);
                rec.out("residual", residual);
                rec.out("delta_p", delta_p);
                rec.out("norm", u.norm());
                rec.check_le("eigen_residual", residual, 1e-9);
                rec.check_le("eigen_spread", delta_p, 1e-9);
                rec
            }
            BoxProbe::DomainCheckPosition { n, .. } => {
                let mut rec = RecordBuilder::new(id, "boxlab", "domain_check", inputs);
                let xu = apply_position(&eigenfunction(&ext, *n));
                let v = domain_check(&xu, &ext).map_err(err)?;
                rec.out("n", n);
                rec.out("in_domain", v.in_domain);
                rec.out("residual", v.residual);
                rec.out("shifted_theta", v.shifted_theta);
                rec.out("tolerance", v.tolerance);
                rec.check_true("verdict_consistency", v.in_domain == (v.residual <= v.tolerance));
                if !standard {
                    // The theta+pi law is the symmetric-box prediction; the
                    // distance is measured on the circle.
                    let want = (theta + PI).rem_euclid(TAU);
                    let d = v.shifted_theta.map_or(f64::INFINITY, |s| {
                        let d = (s - want).abs();
                        d.min(TAU - d)
                    });
                    rec.out("shift_minus_half_turn", d);
                }
                rec.notes.push(v.note);
                rec
            }
            BoxProbe::CanonicalCommutator { state, .. } => {
                let mut rec =
                    RecordBuilder::new(id, "boxlab", "commutator_expectation_canonical", inputs);
                let f = box_state(id, state, &ext)?;
                match commutator_expectation_canonical(&f, &ext).map_err(err)? {
                    CanonicalCommutator::Defined { value } => {
                        rec.out("status", "defined");
                        rec.out("value", complex(value));
                    }
                    CanonicalCommutator::Undefined { offending_factor, residual } => {
                        rec.out("status", "undefined");
                        rec.out("offending_factor", offending_factor);
                        rec.out("residual", residual);
                    }
                }
                rec
            }
            BoxProbe::XmCommutator { state, .. } => {
                let mut rec = RecordBuilder::new(id, "boxlab", "xm_commutator_expectation", inputs);
                let f = box_state(id, state, &ext)?;
                let formula = xm_commutator_expectation(&f, p.hbar).map_err(err)?;
                let pairing = xm_commutator_pairing(&f, p.hbar).map_err(err)?;
                rec.out("value", complex(formula));
                rec.out("abs_value", formula.norm());
                rec.out("pairing", complex(pairing));
                rec.out("boundary_left", complex(f.boundary_left()));
                rec.out("boundary_right", complex(f.boundary_right()));
                rec.check_le("pairing_agreement", (formula - pairing).norm(), EPS_QUAD);
                rec
            }
            BoxProbe::XmReport { state, .. } => {
                let mut rec = RecordBuilder::new(id, "boxlab", "xm_uncertainty_report", inputs);
                let f = box_state(id, state, &ext)?;
                let r = xm_uncertainty_report(&f, &ext).map_err(err)?;
                rec.out("product_over_half_hbar", r.product / (0.5 * p.hbar));
                box_report_outputs(&mut rec, r);
                rec
            }
            BoxProbe::CanonicalReport { state, .. } => {
                let mut rec = RecordBuilder::new(id, "boxlab", "canonical_uncertainty_report", inputs);
                let f = box_state(id, state, &ext)?;
                let r = canonical_uncertainty_report(&f, &ext).map_err(err)?;
                box_report_outputs(&mut rec, r);
                rec
            }
        };
        let mut rec = rec;
        rec.expect(expect, *tolerance);
        rec.limits(at_least, at_most);
        records.push(rec.finish());
    }
    Ok(records)
}

fn build_model(id: &str, spec: &ModelSpec, seed: Option<u64>) -> Result<PtModel> {
    let err = |e: robertson_core::pt::PtError| module_err(id, e);
    match spec {
        ModelSpec::TwoLevel(params) => PtModel::two_level(id, *params).map_err(err),
        ModelSpec::Matrix { rows, parity } => {
            let h = matrix_from_rows(id, rows)?;
            let parity = parity.clone().unwrap_or_else(|| ParityMatrix::exchange(h.nrows()));
            PtModel::new(id, h, parity).map_err(err)
        }
        ModelSpec::RandomUnbroken { dim } => {
            let seed = seed.ok_or_else(|| SchemaError::MissingSeed(id.to_string()))?;
            random_unbroken_model(*dim, seed).map_err(err)
        }
    }
}

fn named_observable(id: &str, which: &NamedObservable, model: &PtModel) -> Result<CMatrix> {
    let n = model.dim();
    Ok(match which {
        NamedObservable::Hamiltonian => model.hamiltonian().clone(),
        NamedObservable::C => model
            .c()
            .cloned()
            .ok_or_else(|| module_err(id, "model has no C operator"))?,
        NamedObservable::Identity => CMatrix::identity(n, n),
        NamedObservable::Parity => model.parity().matrix(),
    })
}

fn observable_name(o: &NamedObservable) -> &'static str {
    match o {
        NamedObservable::Hamiltonian => "hamiltonian",
        NamedObservable::C => "c",
        NamedObservable::Identity => "identity",
        NamedObservable::Parity => "parity",
    }
}

fn run_pt_model(id: &str, inputs: &Value, p: &PtModelParams, seed: Option<u64>) -> Result<ReportRecord> {
    let mut rec = RecordBuilder::new(id, "pt-symmetry", "pt_model", inputs.clone());
    let err = |e: robertson_core::pt::PtError| module_err(id, e);
    let model = build_model(id, &p.model, seed)?;
    let h = model.hamiltonian();
    let sym = is_pt_symmetric(h, model.parity()).map_err(err)?;
    rec.out("dim", model.dim());
    rec.out("hamiltonian", matrix_rows(h));
    rec.out("parity", model.parity());
    rec.out("pt_symmetric", sym.symmetric);
    rec.out("pt_symmetry_residual", sym.residual);
    rec.check_le("pt_symmetry", sym.residual, EPS_PT);
    let ev = model.eigenvalues();
    rec.out("eigenvalues", complex_list(ev.iter().copied()));
    rec.out(
        "max_abs_imag_eigenvalue",
        ev.iter().fold(0.0f64, |m, z| m.max(z.im.abs())),
    );
    rec.out(
        "phase",
        match model.phase() {
            Phase::Unbroken => "unbroken",
            Phase::Broken => "broken",
        },
    );
    rec.notes.extend(model.spectrum().notes.iter().cloned());
    if let Some(basis) = model.basis() {
        rec.out("pt_norm_signs", &basis.signs);
        rec.out("label_offset", basis.label_offset);
        rec.out("alternating_signs", basis.alternating());
        rec.out("min_pt_norm", basis.pt_norms.iter().fold(f64::INFINITY, |m, &x| m.min(x)));
        rec.out("min_gap", basis.min_gap);
    }
    match model.c() {
        Some(c) => {
            let checks = verify_c(&model).map_err(err)?;
            rec.out("c", matrix_rows(c));
            rec.out("c_involution", checks.involution);
            rec.out("c_commutes_with_h", checks.commutes_with_h);
            rec.out("c_commutes_with_pt", checks.commutes_with_pt);
            rec.out("pt_orthogonality", checks.pt_orthogonality);
            rec.out("c_minus_p", norm_inf(&(c - model.parity().matrix())));
            rec.check_le("c_identities", checks.max_residual(), EPS_PT);
        }
        None => {
            rec.out("c_unavailable", model.c_unavailable());
        }
    }
    for o in &p.observables {
        let a = named_observable(id, o, &model)?;
        let name = observable_name(o);
        let v = is_cpt_observable(&a, name, &model).map_err(err)?;
        rec.out(&format!("observable_{name}_residual"), v.residual);
        rec.out(&format!("observable_{name}_satisfies"), v.satisfies_condition);
    }
    if let Some(points) = p.hermitian_limit_points {
        let ModelSpec::TwoLevel(params) = p.model else {
            return Err(module_err(id, "hermitian_limit_points needs a two_level model"));
        };
        if points < 2 {
            return Err(module_err(id, "hermitian_limit_points must be at least 2"));
        }
        let mut path = Vec::with_capacity(points);
        for k in 0..points {
            let theta = params.theta * (1.0 - k as f64 / (points - 1) as f64);
            let m = PtModel::two_level(format!("{id}(theta={theta})"), TwoLevelParams { theta, ..params })
                .map_err(err)?;
            let c = m.c().ok_or_else(|| module_err(id, "no C operator along the path"))?;
            path.push(norm_inf(&(c - m.parity().matrix())));
        }
        let endpoint = path[points - 1];
        rec.out("hermitian_limit_c_minus_p", &path);
        rec.out("hermitian_limit_endpoint", endpoint);
        rec.check_le("hermitian_limit", endpoint, 1e-8);
    }
    rec.expect(&p.expect, p.tolerance);
    rec.limits(&p.at_least, &p.at_most);
    Ok(rec.finish())
}

fn run_pt_non_universality(
    id: &str,
    p: &PtNonUniversalityParams,
    seed: u64,
) -> Result<Vec<ReportRecord>> {
    let err = |e: robertson_core::pt::PtError| module_err(id, e);
    let pairs = find_non_universality_pairs(p.dim, p.pairs, seed).map_err(err)?;
    let mut records = Vec::with_capacity(pairs.len());
    for (k, (m1, m2, demo)) in pairs.iter().enumerate() {
        let inputs = json!({ "dim": p.dim, "pairs": p.pairs, "seed": seed, "pair_index": k });
        let mut rec = RecordBuilder::new(id, "pt-symmetry", "non_universality_demo", inputs);
        let identity = CMatrix::identity(p.dim, p.dim);
        let id1 = is_cpt_observable(&identity, "identity", m1).map_err(err)?;
        let id2 = is_cpt_observable(&identity, "identity", m2).map_err(err)?;
        rec.out("pair_index", k);
        rec.out("h1", matrix_rows(m1.hamiltonian()));
        rec.out("h2", matrix_rows(m2.hamiltonian()));
        rec.out("operator_label", &demo.operator_label);
        rec.out("residual_model_1", demo.under_model_1.residual);
        rec.out("residual_model_2", demo.under_model_2.residual);
        rec.out("satisfies_model_1", demo.under_model_1.satisfies_condition);
        rec.out("satisfies_model_2", demo.under_model_2.satisfies_condition);
        rec.out("demonstrated", demo.demonstrated);
        rec.check_true("demonstrated", demo.demonstrated);
        rec.check_le("holds_under_model_1", demo.under_model_1.residual, EPS_PT);
        rec.check_ge(
            "fails_under_model_2",
            demo.under_model_2.residual,
            robertson_core::pt::NON_UNIVERSALITY_MARGIN,
        );
        rec.check_true(
            "identity_is_universal",
            id1.satisfies_condition && id2.satisfies_condition,
        );
        rec.expect(&p.expect, p.tolerance);
        rec.limits(&p.at_least, &p.at_most);
        records.push(rec.finish());
    }
    Ok(records)
}
