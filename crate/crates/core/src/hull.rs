//! Hull methods: equiangular reduction, the general blow-up method, the
//! Armadillo method and the principal-direction heuristic.

use std::f64::consts::PI;

use num_integer::Integer;

use crate::error::{domain, Error, Result};
use crate::focality::{
    classify, efoc_level, reduce_form, value_set_cardinality, IrreducibleForm, DEFAULT_NODE_CAP,
};
use crate::geometry::{
    angular_order, convex_hull, convex_hull_indices, dedup_indices, hull_contains, outward_normal,
    ComplexValue,
};
use crate::ifs::{normalize_bifractal, Address, IfsSystem, NormalMap};
use crate::loaf::{ideal_bounding_circle, loaf, BoundingCircle, LoafConfig, Target};

/// An extremal point with the form that produced it, when known.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremum {
    pub point: ComplexValue,
    pub form: Option<IrreducibleForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Equiangular,
    General,
    Armadillo,
    HeuristicOnly,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Equiangular => "equiangular",
            Method::General => "general",
            Method::Armadillo => "armadillo",
            Method::HeuristicOnly => "heuristic-only",
        }
    }
}

/// Which method [`compute_hull`] should run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Auto,
    General,
    Armadillo,
    Equiangular,
    Heuristic,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "general" => Ok(MethodChoice::General),
            "armadillo" => Ok(MethodChoice::Armadillo),
            "equiangular" => Ok(MethodChoice::Equiangular),
            "heuristic" => Ok(MethodChoice::Heuristic),
            other => domain(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullResult {
    /// Hull vertices, counterclockwise.
    pub extrema: Vec<Extremum>,
    pub method: Method,
    pub verified: bool,
    pub target_used: Option<Target>,
    /// The maximizer of the target, when a target was used.
    pub principal: Option<Extremum>,
    pub notes: Vec<String>,
}

impl HullResult {
    pub fn points(&self) -> Vec<ComplexValue> {
        self.extrema.iter().map(|e| e.point).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullConfig {
    pub loaf: LoafConfig,
    /// Cap on enumerated addresses and tree nodes outside the search.
    pub node_cap: usize,
    /// Absolute geometric tolerance; defaults to `1e-9·r`.
    pub tol: Option<f64>,
    /// Two points closer than `match_tol·r` are the same point in gate checks.
    pub match_tol: f64,
    /// Target direction for the Armadillo method.
    pub candidate: Option<Target>,
}

impl Default for HullConfig {
    fn default() -> Self {
        HullConfig {
            loaf: LoafConfig::default(),
            node_cap: DEFAULT_NODE_CAP,
            tol: None,
            match_tol: 1e-7,
            candidate: None,
        }
    }
}

fn scale_of(circle: &BoundingCircle) -> f64 {
    if circle.degenerate {
        circle.center.norm().max(1.0)
    } else {
        circle.radius
    }
}

fn tolerance(circle: &BoundingCircle, cfg: &HullConfig) -> f64 {
    cfg.tol.unwrap_or(1e-9 * scale_of(circle))
}

/// `H(S) ⊂ Conv(S)` within `tol`.
pub fn verify_hull(ifs: &IfsSystem, extrema: &[ComplexValue], tol: f64) -> bool {
    let Ok(hull) = convex_hull(extrema, tol) else {
        return false;
    };
    ifs.hutchinson(&hull)
        .into_iter()
        .all(|z| hull_contains(&hull, z, tol))
}

/// Sorts candidates so shorter forms win deduplication, then returns the
/// hull vertices counterclockwise.
fn hull_of_candidates(
    mut cands: Vec<(IrreducibleForm, ComplexValue)>,
    tol: f64,
) -> Result<Vec<Extremum>> {
    cands.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let points: Vec<ComplexValue> = cands.iter().map(|c| c.1).collect();
    let keep = dedup_indices(&points, tol);
    let kept: Vec<ComplexValue> = keep.iter().map(|&i| points[i]).collect();
    Ok(convex_hull_indices(&kept, tol)?
        .into_iter()
        .map(|h| {
            let (form, point) = &cands[keep[h]];
            Extremum {
                point: *point,
                form: Some(form.clone()),
            }
        })
        .collect())
}

fn same_vertex_set(a: &[Extremum], b: &[Extremum], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|e| b.iter().any(|f| (e.point - f.point).norm() <= tol))
}

/// Rotates a counterclockwise vertex list to start at `first` when present.
fn start_at(extrema: &mut [Extremum], first: Option<ComplexValue>, tol: f64) {
    if let Some(p) = first {
        if let Some(i) = extrema.iter().position(|e| (e.point - p).norm() <= tol) {
            extrema.rotate_left(i);
        }
    }
}

fn finish(
    ifs: &IfsSystem,
    mut extrema: Vec<Extremum>,
    method: Method,
    target_used: Option<Target>,
    principal: Option<Extremum>,
    notes: Vec<String>,
    cfg: &HullConfig,
) -> Result<HullResult> {
    let circle = ideal_bounding_circle(ifs)?;
    let tol = tolerance(&circle, cfg);
    let points: Vec<ComplexValue> = extrema.iter().map(|e| e.point).collect();
    let verified = verify_hull(ifs, &points, tol);
    start_at(
        &mut extrema,
        principal.as_ref().map(|e| e.point),
        cfg.match_tol * scale_of(&circle),
    );
    Ok(HullResult {
        extrema,
        method,
        verified,
        target_used,
        principal,
        notes,
    })
}

/// Hull of the periodic points of all addresses of length `M' = |ν|`, which
/// for an equiangular system is a Sierpiński presentation of the same fractal.
pub fn equiangular_hull(ifs: &IfsSystem, cfg: &HullConfig) -> Result<HullResult> {
    if !classify(ifs).is_equiangular {
        return domain("equiangular hull needs congruent rotation angles");
    }
    let len = value_set_cardinality(ifs) as u32;
    let n = ifs.len();
    let count = n
        .checked_pow(len)
        .filter(|&c| c <= cfg.node_cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{n}^{len} periodic points exceed the cap of {}",
                cfg.node_cap
            ))
        })?;
    let circle = ideal_bounding_circle(ifs)?;
    let tol = tolerance(&circle, cfg);
    let mut cands = Vec::with_capacity(count);
    for idx in 0..count {
        let mut digits = Vec::with_capacity(len as usize);
        let mut r = idx;
        for _ in 0..len {
            digits.push(r % n);
            r /= n;
        }
        let x = Address::new(digits);
        let p = ifs.periodic_point(&x)?;
        let form = reduce_form(ifs, &IrreducibleForm::new_unchecked(Address::identity(), x));
        cands.push((form, p));
    }
    let extrema = hull_of_candidates(cands, tol)?;
    finish(
        ifs,
        extrema,
        Method::Equiangular,
        None,
        None,
        Vec::new(),
        cfg,
    )
}

/// Grows the level `L` until the eventually focal points of that level
/// satisfy the containment test.
pub fn general_hull(ifs: &IfsSystem, cfg: &HullConfig) -> Result<HullResult> {
    let circle = ideal_bounding_circle(ifs)?;
    let tol = tolerance(&circle, cfg);
    let bound = 2 * value_set_cardinality(ifs) as usize;
    for level in 1..=bound.max(1) {
        let efoc = efoc_level(ifs, level, cfg.node_cap, tol).map_err(|e| match e {
            Error::Resource(msg) => Error::Resource(format!("{msg} (general method)")),
            other => other,
        })?;
        if efoc.is_empty() {
            continue;
        }
        let points: Vec<ComplexValue> = efoc.iter().map(|e| e.1).collect();
        if verify_hull(ifs, &points, tol) {
            let extrema = hull_of_candidates(efoc, tol)?;
            let notes = vec![format!("containment reached at level {level}")];
            return finish(ifs, extrema, Method::General, None, None, notes, cfg);
        }
    }
    Err(Error::Internal(format!(
        "containment failed at every level up to {bound}"
    )))
}

/// `τ* = i(1 - φ₂)·Log φ₁`.
pub fn principal_direction(ifs: &IfsSystem) -> Result<Target> {
    if !classify(ifs).is_c_ifs {
        return domain("principal direction needs a C-IFS bifractal");
    }
    let m1 = ifs.map(0);
    let log_phi1 = ComplexValue::new(m1.lambda().ln(), m1.angle().radians());
    Target::new(ComplexValue::new(0.0, 1.0) * (1.0 - ifs.map(1).factor()) * log_phi1)
}

/// `(P, Q, M)` with `ϑ₁ = -2πP/M`, `ϑ₂ = 2πQ/M`, checked `0 < P ≤ Q < M/2`.
pub fn heuristic_parameters(ifs: &IfsSystem) -> Result<(u64, u64, u64)> {
    if ifs.len() != 2 {
        return domain("heuristic needs exactly two maps");
    }
    let m = ifs.common_den();
    let p = (m - ifs.numerators()[0]) % m;
    let q = ifs.numerators()[1];
    if !(0 < p && p <= q && 2 * q < m) {
        return domain(format!(
            "heuristic needs 0 < P <= Q < M/2, got P={p}, Q={q}, M={m}"
        ));
    }
    Ok((p, q, m))
}

/// `x` with `T_x = T₂T₁^{n₁}⋯T₂T₁^{n_J}`, `n_j = s_j - s_{j-1}` and
/// `s_j` maximizing `λ₁^s cos(ϑ₁s + ϑ₂j + α)` over `⌊Qj/P⌋, ⌈Qj/P⌉`.
pub fn predict_principal_form(ifs: &IfsSystem) -> Result<Address> {
    let (p, q, m) = heuristic_parameters(ifs)?;
    let g = p.gcd(&q);
    let j_max = p / g;
    let lambda1 = ifs.map(0).lambda();
    let theta1 = -2.0 * PI * p as f64 / m as f64;
    let theta2 = 2.0 * PI * q as f64 / m as f64;
    let alpha = (lambda1.ln() / theta1).atan();
    let t = |s: u64, j: u64| {
        lambda1.powf(s as f64) * (theta1 * s as f64 + theta2 * j as f64 + alpha).cos()
    };
    let mut word = Vec::new();
    let mut prev = 0u64;
    for j in 1..=j_max {
        let lo = q * j / p;
        let hi = (q * j).div_ceil(p);
        let s = if t(hi, j) > t(lo, j) { hi } else { lo };
        word.push(1);
        word.extend(std::iter::repeat_n(0, (s - prev) as usize));
        prev = s;
    }
    Ok(Address::new(word))
}

/// Orders the cycle around `c` and asks the search, along the outward normal
/// of each angularly adjacent pair, whether both points are maximizers.
/// At most one pair (the gap between the ends of a plate) may fail.
pub fn consecutiveness_check(
    ifs: &IfsSystem,
    cycle: &[(Address, ComplexValue)],
    circle: &BoundingCircle,
    cfg: &HullConfig,
) -> Result<bool> {
    let k = cycle.len();
    if k <= 1 {
        return Ok(true);
    }
    let points: Vec<ComplexValue> = cycle.iter().map(|c| c.1).collect();
    let Ok(order) = angular_order(&points, circle.center) else {
        return Ok(false);
    };
    let pairs = if k == 2 { 1 } else { k };
    let close = cfg.match_tol * scale_of(circle);
    let mut failures = 0;
    for i in 0..pairs {
        let (e1, e2) = (points[order[i]], points[order[(i + 1) % k]]);
        let passed = match outward_normal(e1, e2, circle.center) {
            Ok(normal) => {
                let found = loaf(&Target::new(normal)?, ifs, &cfg.loaf)?;
                [e1, e2].iter().all(|e| {
                    found
                        .maximizers
                        .iter()
                        .any(|m| (m.point - e).norm() <= close)
                })
            }
            Err(_) => false,
        };
        if !passed {
            failures += 1;
        }
    }
    Ok(failures <= pairs - (k - 1).min(pairs))
}

/// Plate iterates `T_k^l(Cyc(x))` for `l ≤ ⌈π/|ϑ_k|⌉ + extra`; zero-angle maps
/// contribute their fixed point instead.
fn plate_candidates(
    ifs: &IfsSystem,
    cycle: &[(Address, ComplexValue)],
    extra: usize,
) -> Vec<(IrreducibleForm, ComplexValue)> {
    let mut out = Vec::new();
    for (y, p) in cycle {
        let base = IrreducibleForm::new_unchecked(Address::identity(), y.clone());
        out.push((reduce_form(ifs, &base), *p));
    }
    for (k, map) in ifs.maps().iter().enumerate() {
        let angle = map.angle();
        if angle.is_zero() {
            let form = IrreducibleForm::new_unchecked(Address::identity(), Address::new(vec![k]));
            out.push((form, map.fixed_point()));
            continue;
        }
        let steps = (angle.den() as u64).div_ceil(2 * angle.num().unsigned_abs()) as usize + extra;
        for (y, p) in cycle {
            let mut z = *p;
            for l in 1..=steps {
                z = map.apply(z);
                let form = IrreducibleForm::new_unchecked(Address::repeat(k, l), y.clone());
                out.push((reduce_form(ifs, &form), z));
            }
        }
    }
    out
}

/// Plate hull with the smallest number of extra iterates after which one
/// more iterate leaves the vertex set unchanged. Past the rotation order of
/// `T_k` its iterates shrink towards `p_k` and add nothing new, which bounds
/// the search.
fn stable_plate_hull(
    ifs: &IfsSystem,
    cycle: &[(Address, ComplexValue)],
    tol: f64,
    close: f64,
) -> Result<Option<(Vec<Extremum>, usize)>> {
    let order = ifs
        .maps()
        .iter()
        .map(|m| m.angle().den() as usize)
        .max()
        .unwrap_or(1);
    let mut current = hull_of_candidates(plate_candidates(ifs, cycle, 0), tol)?;
    for extra in 0..=order {
        let wider = hull_of_candidates(plate_candidates(ifs, cycle, extra + 1), tol)?;
        if same_vertex_set(&current, &wider, close) {
            return Ok(Some((current, extra)));
        }
        current = wider;
    }
    Ok(None)
}

struct Attempt {
    extrema: Vec<Extremum>,
    target: Target,
    principal: Extremum,
    notes: Vec<String>,
}

/// One pass of the Armadillo pipeline in the working coordinates.
fn armadillo_attempt(
    ifs: &IfsSystem,
    tau: Target,
    cfg: &HullConfig,
) -> Result<std::result::Result<Attempt, String>> {
    let circle = ideal_bounding_circle(ifs)?;
    let tol = tolerance(&circle, cfg);
    let close = cfg.match_tol * scale_of(&circle);
    let mut notes = Vec::new();

    let found = match loaf(&tau, ifs, &cfg.loaf) {
        Err(Error::Resource(msg)) => return Ok(Err(msg)),
        other => other?,
    };
    notes.extend(found.notes.iter().cloned());
    if !found.is_unique() {
        return Ok(Err("maximizer is not unique".into()));
    }
    let top = &found.maximizers[0];
    let x = top.form.period().clone();
    if !ifs.is_strictly_focal(&x)? {
        return Ok(Err(format!("maximizing period {x} is not strictly focal")));
    }
    let mut target = tau;
    if !top.form.prefix().is_empty() {
        let nu = ifs.value_of(top.form.prefix())? as f64;
        target = tau.rotated(-2.0 * PI * nu / ifs.common_den() as f64);
        let px = ifs.periodic_point(&x)?;
        let again = match loaf(&target, ifs, &cfg.loaf) {
            Err(Error::Resource(msg)) => return Ok(Err(msg)),
            other => other?,
        };
        if !(again.is_unique() && (again.maximizers[0].point - px).norm() <= close) {
            return Ok(Err("retargeted direction does not single out p_x".into()));
        }
    }
    let cycle = ifs.cycle_of(&x)?;
    match consecutiveness_check(ifs, &cycle, &circle, cfg) {
        Err(Error::Resource(msg)) => return Ok(Err(msg)),
        Ok(false) => return Ok(Err(format!("cycle of {x} is not consecutive"))),
        other => other.map(|_| ())?,
    }
    let Some((extrema, extra)) = stable_plate_hull(ifs, &cycle, tol, close)? else {
        return Ok(Err("plate iterates never stabilise".into()));
    };
    if extra > 0 {
        notes.push(format!(
            "plate iteration needed {extra} extra step(s) to stabilise"
        ));
    }
    let points: Vec<ComplexValue> = extrema.iter().map(|e| e.point).collect();
    if !verify_hull(ifs, &points, tol) {
        return Ok(Err("plate iterates fail the containment test".into()));
    }
    let principal = Extremum {
        point: cycle[0].1,
        form: Some(IrreducibleForm::new_unchecked(Address::identity(), x)),
    };
    Ok(Ok(Attempt {
        extrema,
        target,
        principal,
        notes,
    }))
}

fn map_back(nm: &Option<NormalMap>, e: Extremum) -> Extremum {
    match nm {
        Some(nm) => Extremum {
            point: nm.inverse(e.point),
            form: e.form,
        },
        None => e,
    }
}

/// Finds a regular direction (a unique, strictly focal maximizer with a
/// consecutive cycle), tiles the hull with plate iterates of its cycle and
/// checks containment. Falls back to [`general_hull`] when every candidate
/// direction fails.
pub fn armadillo_hull(ifs: &IfsSystem, cfg: &HullConfig) -> Result<HullResult> {
    let mut notes = Vec::new();
    let (work, nm, tau) = match cfg.candidate {
        Some(tau) => (ifs.clone(), None, tau),
        None => {
            if !classify(ifs).is_c_ifs {
                notes.push("no target direction for a non-C-IFS system".to_string());
                return fallback(ifs, cfg, notes);
            }
            match normalize_bifractal(ifs) {
                Ok((work, nm)) => {
                    let tau = principal_direction(&work)?;
                    (work, Some(nm), tau)
                }
                Err(e) => {
                    notes.push(format!("normal form unavailable: {e}"));
                    return fallback(ifs, cfg, notes);
                }
            }
        }
    };
    if ifs.len() == 1 || ideal_bounding_circle(&work)?.degenerate {
        notes.push("single-point attractor".to_string());
        return fallback(ifs, cfg, notes);
    }
    let step = 2.0 * PI / work.common_den() as f64;
    let rotations = [0.0, step / 4.0, -step / 4.0, step / 2.0, -step / 2.0];
    for (i, &rot) in rotations.iter().enumerate() {
        let candidate = tau.rotated(rot);
        match armadillo_attempt(&work, candidate, cfg)? {
            Ok(found) => {
                notes.extend(found.notes);
                if nm.is_some() && i == 0 {
                    if let Ok(predicted) = predict_principal_form(&work) {
                        let got = found.principal.form.as_ref().map(|f| f.period());
                        if got != Some(&predicted) {
                            notes.push(format!(
                                "heuristic predicted {predicted}, search found {}",
                                got.map(|a| a.to_string()).unwrap_or_default()
                            ));
                        }
                    }
                }
                let target = match &nm {
                    Some(nm) => Target::new(nm.inverse_direction(found.target.direction()))?,
                    None => found.target,
                };
                let extrema = found
                    .extrema
                    .into_iter()
                    .map(|e| map_back(&nm, e))
                    .collect();
                let principal = map_back(&nm, found.principal);
                return finish(
                    ifs,
                    extrema,
                    Method::Armadillo,
                    Some(target),
                    Some(principal),
                    notes,
                    cfg,
                );
            }
            Err(reason) => notes.push(format!("direction attempt {}: {reason}", i + 1)),
        }
    }
    fallback(ifs, cfg, notes)
}

fn fallback(ifs: &IfsSystem, cfg: &HullConfig, notes: Vec<String>) -> Result<HullResult> {
    let mut result = general_hull(ifs, cfg).map_err(|e| match e {
        Error::Resource(msg) if !notes.is_empty() => {
            Error::Resource(format!("{msg}; earlier: {}", notes.join("; ")))
        }
        other => other,
    })?;
    let mut all = notes;
    all.push("fell back to the general method".to_string());
    all.append(&mut result.notes);
    result.notes = all;
    Ok(result)
}

/// Uses the predicted principal form without any search; `verified` reports
/// the containment test.
pub fn heuristic_hull(ifs: &IfsSystem, cfg: &HullConfig) -> Result<HullResult> {
    if !classify(ifs).is_c_ifs {
        return domain("heuristic hull needs a C-IFS bifractal");
    }
    let (work, nm) = normalize_bifractal(ifs)?;
    let x = predict_principal_form(&work)?;
    let circle = ideal_bounding_circle(&work)?;
    let cycle = work.cycle_of(&x)?;
    let tol = tolerance(&circle, cfg);
    let (extrema, notes) =
        match stable_plate_hull(&work, &cycle, tol, cfg.match_tol * scale_of(&circle))? {
            Some((extrema, 0)) => (extrema, Vec::new()),
            Some((extrema, extra)) => (
                extrema,
                vec![format!(
                    "plate iteration needed {extra} extra step(s) to stabilise"
                )],
            ),
            None => (
                hull_of_candidates(plate_candidates(&work, &cycle, 0), tol)?,
                vec!["plate iterates never stabilise".to_string()],
            ),
        };
    let principal = Extremum {
        point: nm.inverse(cycle[0].1),
        form: Some(IrreducibleForm::new_unchecked(Address::identity(), x)),
    };
    let target = Target::new(nm.inverse_direction(principal_direction(&work)?.direction()))?;
    let nm = Some(nm);
    let extrema = extrema.into_iter().map(|e| map_back(&nm, e)).collect();
    finish(
        ifs,
        extrema,
        Method::HeuristicOnly,
        Some(target),
        Some(principal),
        notes,
        cfg,
    )
}

/// Routes to a method. `Auto` sends equiangular systems to the equiangular
/// method, C-IFS systems and systems with a candidate direction to the
/// Armadillo method, and everything else to the general method. A C-IFS
/// that exhausts the node cap gets the predicted plates instead, but only
/// when they pass the containment test.
pub fn compute_hull(ifs: &IfsSystem, choice: MethodChoice, cfg: &HullConfig) -> Result<HullResult> {
    match choice {
        MethodChoice::General => general_hull(ifs, cfg),
        MethodChoice::Armadillo => armadillo_hull(ifs, cfg),
        MethodChoice::Equiangular => equiangular_hull(ifs, cfg),
        MethodChoice::Heuristic => heuristic_hull(ifs, cfg),
        MethodChoice::Auto => {
            let class = classify(ifs);
            if class.is_equiangular {
                match equiangular_hull(ifs, cfg) {
                    Err(Error::Resource(msg)) => {
                        fallback(ifs, cfg, vec![format!("equiangular method: {msg}")])
                    }
                    other => other,
                }
            } else if class.is_c_ifs && cfg.candidate.is_none() {
                match armadillo_hull(ifs, cfg) {
                    Err(Error::Resource(msg)) => match heuristic_hull(ifs, cfg) {
                        Ok(mut r) if r.verified => {
                            r.notes.insert(0, format!("exact search gave up: {msg}"));
                            r.notes
                                .insert(1, "predicted plates pass the containment test".into());
                            Ok(r)
                        }
                        _ => Err(Error::Resource(msg)),
                    },
                    other => other,
                }
            } else if class.is_c_ifs || cfg.candidate.is_some() {
                armadillo_hull(ifs, cfg)
            } else {
                general_hull(ifs, cfg)
            }
        }
    }
}
