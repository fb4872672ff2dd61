use heiskor_core::bessel::{bessel_i_eval, bessel_k, bessel_k_verified, bessel_k_with};
use heiskor_core::heisenberg::{identity_fuzz, random_chord_pairs, sublevel_fit};
use heiskor_core::koranyi::{
    bound_scan, energy_duality_check, fhat, fhat_oracle, tuck_check, DualityOptions, GridDensity,
    LogGrid, OracleOptions,
};
use heiskor_core::measures::{
    default_scan_angles, frostman_constant, ifs_sample, riesz_energy, theorem_bound_scan, EnergyMetric, IfsSpec,
};
use heiskor_core::{Angle, BesselMethod, BesselOrder, DiscreteMeasure, Error, FreqPoint, HPoint, KernelParam, ScanReport};
use serde_json::{json, Value};

use crate::args::{
    BesselArgs, BesselKind, BoundScanArgs, Command, DualityArgs, EnergyArgs, FhatArgs, HeisCheckArgs, MethodChoice,
    MetricChoice, ProjectDimArgs, ScaleRange, SetChoice, SublevelArgs, TuckArgs,
};

pub enum Payload {
    Record(Value),
    Table(ScanReport),
}

/// A finished run. `failure` is set when the numbers were produced but a
/// tolerance check on them failed.
pub struct Outcome {
    pub payload: Payload,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(payload: Payload) -> Self {
        Self { payload, failure: None }
    }

    fn check(payload: Payload, passed: bool, msg: impl FnOnce() -> String) -> Self {
        Self {
            payload,
            failure: (!passed).then(msg),
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialise")
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome, Error> {
    match cmd {
        Command::Bessel(a) => bessel(a),
        Command::Fhat(a) => fhat_cmd(a),
        Command::Tuck(a) => tuck(a),
        Command::BoundScan(a) => scan(a),
        Command::Duality(a) => duality(a),
        Command::HeisCheck(a) => heis_check(a, seed),
        Command::Sublevel(a) => sublevel(a, seed),
        Command::ProjectDim(a) => project_dim(a, seed),
        Command::Energy(a) => energy(a, seed),
    }
}

fn bessel(a: &BesselArgs) -> Result<Outcome, Error> {
    let order = BesselOrder::new(a.nu)?;
    let eval = match (a.function, a.method) {
        (BesselKind::K, MethodChoice::Auto) => bessel_k(order, a.x)?,
        (BesselKind::K, MethodChoice::Verified) => bessel_k_verified(order, a.x)?,
        (BesselKind::K, MethodChoice::Series) => bessel_k_with(BesselMethod::Series, order, a.x)?,
        (BesselKind::K, MethodChoice::Basset) => bessel_k_with(BesselMethod::BassetQuadrature, order, a.x)?,
        (BesselKind::K, MethodChoice::Asymptotic) => bessel_k_with(BesselMethod::Asymptotic, order, a.x)?,
        (BesselKind::I, MethodChoice::Auto | MethodChoice::Series) => bessel_i_eval(order, a.x)?,
        (BesselKind::I, m) => {
            return Err(Error::Domain(format!(
                "I_ν is evaluated by its power series only; method {m:?} is not available"
            )))
        }
    };
    Ok(Outcome::ok(Payload::Record(json!({
        "function": a.function,
        "nu": a.nu,
        "x": a.x,
        "value": eval.value,
        "method": eval.method.as_str(),
        "abs_error_estimate": eval.abs_error_estimate,
    }))))
}

fn fhat_cmd(a: &FhatArgs) -> Result<Outcome, Error> {
    let s = KernelParam::new(a.s)?;
    let xi = FreqPoint::new(a.xi1, a.xi2)?;
    let f = fhat(s, xi)?;
    if !(f.value > 0.0) {
        return Err(Error::Certification(format!("nonpositive transform {:e}", f.value)));
    }
    let mut rec = json!({
        "s": a.s,
        "xi1": a.xi1,
        "xi2": a.xi2,
        "fhat": f,
    });
    if !a.oracle {
        return Ok(Outcome::ok(Payload::Record(rec)));
    }
    let opts = OracleOptions {
        truncation: a.truncation,
        rel_tol: a.rel_tol,
        ..OracleOptions::default()
    };
    let o = fhat_oracle(s, xi, opts)?;
    let diff = (f.value - o.value).abs();
    let budget = f.abs_error + o.certified_error;
    let agrees = diff <= budget;
    rec["oracle"] = to_value(&o);
    rec["oracle_options"] = to_value(&opts);
    rec["abs_difference"] = json!(diff);
    rec["combined_error"] = json!(budget);
    rec["agrees"] = json!(agrees);
    Ok(Outcome::check(Payload::Record(rec), agrees, || {
        format!("transform and oracle differ by {diff:e}, combined error {budget:e}")
    }))
}

fn tuck(a: &TuckArgs) -> Result<Outcome, Error> {
    let s = KernelParam::new(a.s)?;
    if a.per_decade == 0 {
        return Err(Error::Domain("per-decade must be at least 1".into()));
    }
    let grid: Vec<f64> = (0..=5 * a.per_decade)
        .map(|k| 10f64.powf(-4.0 + k as f64 / a.per_decade as f64))
        .collect();
    let r = tuck_check(s, &grid)?;
    let passed = r.passed();
    let failed: Vec<&str> = r.conditions.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    Ok(Outcome::check(Payload::Record(to_value(&r)), passed, || {
        format!("conditions failed: {}", failed.join(", "))
    }))
}

fn scan(a: &BoundScanArgs) -> Result<Outcome, Error> {
    let s = KernelParam::new(a.s)?;
    let grid = LogGrid::new(a.grid_decades.lo, a.grid_decades.hi, a.per_decade)?;
    let r = bound_scan(s, grid)?;
    Ok(Outcome::ok(Payload::Table(r.to_scan_report())))
}

fn duality(a: &DualityArgs) -> Result<Outcome, Error> {
    let s = KernelParam::new(a.s)?;
    let opts = DualityOptions {
        freq_cutoff: a.freq_cutoff,
    };
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for (name, d) in GridDensity::reference_set() {
        if a.density.key().is_some_and(|k| k != name) {
            continue;
        }
        let r = energy_duality_check(&d, s, opts)?;
        let holds = r.holds(a.slack);
        if !holds {
            failed.push(name);
        }
        let mut v = to_value(&r);
        v["density"] = json!(name);
        v["rel_slack"] = json!(a.slack);
        v["holds"] = json!(holds);
        reports.push(v);
    }
    Ok(Outcome::check(
        Payload::Record(json!({ "s": a.s, "reports": reports })),
        failed.is_empty(),
        || format!("lhs exceeds rhs for {}", failed.join(", ")),
    ))
}

fn heis_check(a: &HeisCheckArgs, seed: u64) -> Result<Outcome, Error> {
    let r = identity_fuzz(a.fuzz, seed)?;
    let passed = r.passed();
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    Ok(Outcome::check(Payload::Record(to_value(&r)), passed, || {
        format!("identities over tolerance: {}", failed.join(", "))
    }))
}

fn sublevel(a: &SublevelArgs, seed: u64) -> Result<Outcome, Error> {
    if a.pairs == 0 || a.per_decade == 0 {
        return Err(Error::Domain("pairs and per-decade must be at least 1".into()));
    }
    let eps = a.eps_decades.values(a.per_decade);
    let fits = random_chord_pairs(a.pairs, seed)
        .into_iter()
        .map(|(p, q)| sublevel_fit(p, q, &eps, a.samples))
        .collect::<Result<Vec<_>, _>>()?;
    let min = fits.iter().map(|f| f.exponent).fold(f64::INFINITY, f64::min);
    let rec = json!({
        "pairs": fits,
        "min_exponent": min,
        "required_exponent": a.min_exponent,
        "samples": a.samples,
    });
    Ok(Outcome::check(Payload::Record(rec), min >= a.min_exponent, || {
        format!("smallest fitted exponent {min} is below {}", a.min_exponent)
    }))
}

fn ifs_for(set: SetChoice, seed: u64) -> IfsSpec {
    match set {
        SetChoice::Cantor => IfsSpec::horizontal_cantor(seed),
        SetChoice::Segment => IfsSpec::horizontal_segment(seed),
        SetChoice::VerticalAxis => IfsSpec::vertical_segment(seed),
    }
}

fn default_scales(set: SetChoice) -> ScaleRange {
    match set {
        SetChoice::VerticalAxis => ScaleRange {
            hi: 1.0,
            lo: 0.01,
            count: 21,
        },
        _ => ScaleRange {
            hi: 0.3,
            lo: 3e-3,
            count: 21,
        },
    }
}

fn project_dim(a: &ProjectDimArgs, seed: u64) -> Result<Outcome, Error> {
    if a.thetas == 0 {
        return Err(Error::Domain("at least one angle is required".into()));
    }
    let thetas = if a.thetas == 16 {
        default_scan_angles()
    } else {
        (0..a.thetas)
            .map(|k| Angle::new((k as f64 + 0.5) * std::f64::consts::PI / a.thetas as f64))
            .collect::<Result<Vec<_>, _>>()?
    };
    let scales = a.scales.unwrap_or_else(|| default_scales(a.set)).values();
    let mut r = theorem_bound_scan(&ifs_for(a.set, seed), &thetas, &scales, a.points)?;
    let margin = r.summary["min_margin"];
    r.summary.insert("slack".into(), a.slack);
    Ok(Outcome::check(Payload::Table(r), margin >= -a.slack, || {
        format!("projected dimension falls {:.4} below the floor", -margin)
    }))
}

fn energy(a: &EnergyArgs, seed: u64) -> Result<Outcome, Error> {
    let points = match a.set {
        SetChoice::Segment => (0..a.points)
            .map(|i| HPoint::new((i as f64 + 0.5) / a.points as f64, 0.0, 0.0))
            .collect::<Result<Vec<_>, _>>()?,
        set => ifs_sample(&ifs_for(set, seed), a.points)?,
    };
    let mu = DiscreteMeasure::uniform(points)?;
    let metric = match a.metric {
        MetricChoice::Koranyi => EnergyMetric::Koranyi,
        MetricChoice::Parabolic => EnergyMetric::Parabolic,
        MetricChoice::VerticalPlane => EnergyMetric::VerticalPlane,
    };
    let radii = a.radii.values();
    let e = riesz_energy(&mu, a.s, metric)?;
    let c = frostman_constant(&mu, a.s, &radii)?;
    Ok(Outcome::ok(Payload::Record(json!({
        "set": a.set,
        "points": a.points,
        "s": a.s,
        "metric": metric,
        "riesz_energy": e,
        "frostman_constant": c,
        "frostman_radii": radii,
    }))))
}
