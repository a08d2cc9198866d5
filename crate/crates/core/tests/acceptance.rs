//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ifs_hull::{
    armadillo_hull, compute_hull, dominates, equiangular_hull, general_hull, ideal_bounding_circle,
    loaf, parse_ifs_file, predict_principal_form, principal_direction, value_set_cardinality,
    Address, ComplexValue, Contraction, HullConfig, HullResult, IfsSystem, LoafConfig, Method,
    MethodChoice, RationalAngle, Target,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn system(file: &str) -> IfsSystem {
    parse_ifs_file(file).expect("corpus file parses").system
}

fn levy() -> IfsSystem {
    system(include_str!("../../../data/levy.ifs"))
}

fn twindragon() -> IfsSystem {
    system(include_str!("../../../data/twindragon.ifs"))
}

fn example3() -> IfsSystem {
    system(include_str!("../../../data/bifractal-p2-q3.ifs"))
}

fn addr(one_based: &[usize]) -> Address {
    Address::from_one_based(one_based).unwrap()
}

fn digits(s: &str) -> Address {
    addr(&s.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>())
}

fn near(a: ComplexValue, b: ComplexValue, tol: f64, what: &str) -> Result<(), String> {
    if (a - b).norm() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: got {a}, want {b} (tol {tol:e})"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < budget, || {
        format!("{what} took {elapsed:?}, budget {budget:?}")
    })
}

fn same_points(a: &[ComplexValue], b: &[ComplexValue], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| (p - q).norm() <= tol))
        && b.iter().all(|p| a.iter().any(|q| (p - q).norm() <= tol))
}

fn random_bifractal(rng: &mut StdRng, m: i64, n1: i64, n2: i64, lo: f64, hi: f64) -> IfsSystem {
    let (p1, p2) = if rng.gen_bool(0.5) {
        (c(0.0, 0.0), c(1.0, 0.0))
    } else {
        (
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        )
    };
    IfsSystem::new(vec![
        Contraction::new(
            p1,
            rng.gen_range(lo..hi),
            RationalAngle::new(n1, m).unwrap(),
        )
        .unwrap(),
        Contraction::new(
            p2,
            rng.gen_range(lo..hi),
            RationalAngle::new(n2, m).unwrap(),
        )
        .unwrap(),
    ])
    .unwrap()
}

/// Two maps, `M ≤ 12`, contraction ratios in `[0.4, 0.8]`, fixed points apart.
fn random_unity_system(rng: &mut StdRng) -> IfsSystem {
    loop {
        let m = rng.gen_range(1..=12);
        let n1 = rng.gen_range(0..m);
        let n2 = rng.gen_range(0..m);
        let s = random_bifractal(rng, m, n1, n2, 0.4, 0.8);
        let f = s.fixed_points();
        if (f[0] - f[1]).norm() > 0.1 {
            return s;
        }
    }
}

/// `ϑ₁ ∈ (-π, 0)`, `ϑ₂ ∈ (0, π)`, `|ϑ₁| ≤ ϑ₂`, `M ≤ 12`.
fn random_c_ifs(rng: &mut StdRng) -> IfsSystem {
    loop {
        let m = rng.gen_range(3..=12);
        let n2 = rng.gen_range(1..=(m - 1) / 2);
        let n1 = -rng.gen_range(1..=n2);
        let s = random_bifractal(rng, m, n1, n2, 0.4, 0.8);
        let f = s.fixed_points();
        if (f[0] - f[1]).norm() > 0.1 {
            return s;
        }
    }
}

fn cycle_points(ifs: &IfsSystem, x: &Address) -> Vec<ComplexValue> {
    ifs.cycle_of(x)
        .unwrap()
        .into_iter()
        .map(|(_, p)| p)
        .collect()
}

/// Point in or on a counter-clockwise convex polygon, by brute orientation.
fn in_polygon(poly: &[ComplexValue], z: ComplexValue, tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => (z - poly[0]).norm() <= tol,
        n => (0..n).all(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let e = b - a;
            let len = e.norm();
            len == 0.0 || (e.re * (z - a).im - e.im * (z - a).re) / len >= -tol
        }),
    }
}

fn criterion_1() -> Check {
    let s = levy();
    let start = Instant::now();
    let r =
        compute_hull(&s, MethodChoice::Auto, &HullConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.extrema.len() == 8, || {
        format!("{} extrema", r.extrema.len())
    })?;
    ensure(r.method == Method::Armadillo && r.verified, || {
        format!("method {} verified {}", r.method.as_str(), r.verified)
    })?;
    let p = r.principal.as_ref().ok_or("no principal point")?;
    near(p.point, c(1.0, -1.0), 1e-9, "principal point")?;
    let x = p
        .form
        .as_ref()
        .ok_or("principal point has no form")?
        .period()
        .clone();
    let cyc = cycle_points(&s, &x);
    ensure(
        same_points(&cyc, &[c(1.0, -1.0), c(0.0, -1.0)], 1e-9),
        || format!("cycle {cyc:?}"),
    )?;
    within(elapsed, Duration::from_secs(1), "hull")?;
    Ok(format!("x={x}, {elapsed:?}"))
}

fn criterion_2() -> Check {
    let s = twindragon();
    let start = Instant::now();
    let tau = principal_direction(&s).map_err(|e| e.to_string())?;
    let m = loaf(&tau, &s, &LoafConfig::default()).map_err(|e| e.to_string())?;
    ensure(m.is_unique(), || "maximizer not unique".into())?;
    let top = &m.maximizers[0];
    ensure(
        top.form.prefix().is_empty() && *top.form.period() == digits("2111"),
        || format!("form ({}, {})", top.form.prefix(), top.form.period()),
    )?;
    near(top.point, c(2.0, -2.0 / 3.0), 1e-9, "e*")?;
    let cyc = cycle_points(&s, top.form.period());
    let want = [
        c(2.0, -2.0 / 3.0),
        c(2.0 / 3.0, -4.0 / 3.0),
        c(-1.0 / 3.0, -1.0),
        c(-2.0 / 3.0, -1.0 / 3.0),
    ];
    ensure(same_points(&cyc, &want, 1e-9), || format!("cycle {cyc:?}"))?;
    let r =
        compute_hull(&s, MethodChoice::Auto, &HullConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let plates: Vec<ComplexValue> = cyc
        .iter()
        .flat_map(|&p| [p, s.map(0).apply(p), s.map(1).apply(p)])
        .collect();
    for e in r.points() {
        ensure(plates.iter().any(|q| (e - q).norm() <= 1e-9), || {
            format!("{e} outside the plates")
        })?;
    }
    ensure(r.verified, || "hull not verified".into())?;
    within(elapsed, Duration::from_secs(2), "loaf and hull")?;
    Ok(format!("{} extrema, {elapsed:?}", r.extrema.len()))
}

fn criterion_3() -> Check {
    let s = example3();
    let predicted = predict_principal_form(&s).map_err(|e| e.to_string())?;
    ensure(predicted == digits("21121"), || {
        format!("predicted {predicted}")
    })?;
    let tau = principal_direction(&s).map_err(|e| e.to_string())?;
    near(tau.direction(), c(0.7672, -1.1115), 1e-3, "τ*")?;
    let m = loaf(&tau, &s, &LoafConfig::default()).map_err(|e| e.to_string())?;
    ensure(m.is_unique(), || "maximizer not unique".into())?;
    let top = &m.maximizers[0];
    ensure(
        top.form.prefix().is_empty() && *top.form.period() == predicted,
        || {
            format!(
                "search found ({}, {})",
                top.form.prefix(),
                top.form.period()
            )
        },
    )?;
    near(top.point, c(1.2993, -1.0655), 1e-3, "e*")?;
    Ok(format!("e*={:.4}", top.point))
}

fn criterion_4() -> Check {
    let cases = [
        (levy(), c(0.2194, -0.5660)),
        (twindragon(), c(1.0048, -0.9126)),
        (example3(), c(0.7672, -1.1115)),
    ];
    for (s, want) in &cases {
        let t = principal_direction(s).map_err(|e| e.to_string())?;
        near(t.direction(), *want, 1e-3, "τ*")?;
    }
    Ok("3 directions".into())
}

fn criterion_5() -> Check {
    let q9 = system(include_str!("../../../data/bifractal-p8-q9.ifs"));
    let x = predict_principal_form(&q9).map_err(|e| e.to_string())?;
    ensure(x.len() == 17, || format!("(8,9): |x| = {}", x.len()))?;

    let q12 = system(include_str!("../../../data/bifractal-p5-q12.ifs"));
    let x = predict_principal_form(&q12).map_err(|e| e.to_string())?;
    let block = digits("2112111");
    let want = block.concat(&block).concat(&digits("211"));
    ensure(x == want, || format!("(5,12): x = {x}, want {want}"))?;

    let q17 = system(include_str!("../../../data/bifractal-p2-q17.ifs"));
    let x = predict_principal_form(&q17).map_err(|e| e.to_string())?;
    let want = addr(&[2])
        .concat(&Address::repeat(0, 9))
        .concat(&addr(&[2]))
        .concat(&Address::repeat(0, 8));
    ensure(x == want, || format!("(2,17): x = {x}, want {want}"))?;
    let e = q17.periodic_point(&x).map_err(|e| e.to_string())?;
    near(e, c(0.1958, -0.6532), 1e-3, "(2,17) e*")?;

    let q35 = system(include_str!("../../../data/bifractal-p6-q35.ifs"));
    let start = Instant::now();
    let x = predict_principal_form(&q35).map_err(|e| e.to_string())?;
    ensure(x.len() == 41, || format!("(6,35): |x| = {}", x.len()))?;
    let r = compute_hull(&q35, MethodChoice::Auto, &HullConfig::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let p = r.principal.as_ref().ok_or("(6,35): no principal point")?;
    near(p.point, c(1.8720, -0.4808), 1e-3, "(6,35) e*")?;
    ensure(r.verified, || "(6,35) hull not verified".into())?;
    within(elapsed, Duration::from_secs(60), "(6,35) hull")?;
    Ok(format!(
        "(6,35) {} via {} in {elapsed:?}",
        r.extrema.len(),
        r.method.as_str()
    ))
}

fn criterion_6() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut fired, mut chains) = (0, 0);
    for trial in 0..1000 {
        let s = random_unity_system(&mut rng);
        let circle = ideal_bounding_circle(&s).map_err(|e| e.to_string())?;
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let tau = Target::new(ComplexValue::from_polar(rng.gen_range(0.5..2.0), angle)).unwrap();
        let len = rng.gen_range(1..=3);
        let pick = |rng: &mut StdRng| Address::new((0..len).map(|_| rng.gen_range(0..2)).collect());
        let (a, b, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let dom = |x: &Address, y: &Address| dominates(&tau, &s, &circle, x, y).unwrap();
        for x in [&a, &b, &d] {
            ensure(!dom(x, x), || {
                format!("trial {trial}: {x} dominates itself")
            })?;
        }
        for (x, y) in [(&a, &b), (&b, &d), (&a, &d)] {
            if dom(x, y) {
                fired += 1;
                ensure(!dom(y, x), || {
                    format!("trial {trial}: {x} and {y} dominate each other")
                })?;
            }
        }
        if dom(&a, &b) && dom(&b, &d) {
            chains += 1;
            ensure(dom(&a, &d), || {
                format!("trial {trial}: {a} ≻ {b} ≻ {d} but not {a} ≻ {d}")
            })?;
        }
    }
    Ok(format!("{fired} dominations, {chains} chains"))
}

fn criterion_7() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = f64::INFINITY;
    for sys in 0..25 {
        let s = random_unity_system(&mut rng);
        let r = ideal_bounding_circle(&s).map_err(|e| e.to_string())?.radius;
        let cloud = s.point_cloud(0, 12, 1 << 13).map_err(|e| e.to_string())?;
        for _ in 0..8 {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let tau =
                Target::new(ComplexValue::from_polar(rng.gen_range(0.5..2.0), angle)).unwrap();
            let m = loaf(&tau, &s, &LoafConfig::default()).map_err(|e| e.to_string())?;
            let got = tau.value(m.maximizers[0].point);
            let brute = cloud
                .iter()
                .map(|&z| tau.value(z))
                .fold(f64::NEG_INFINITY, f64::max);
            let slack = (got - brute) / (r * tau.norm()).max(f64::MIN_POSITIVE);
            worst = worst.min(slack);
            ensure(got >= brute - 1e-6 * r * tau.norm(), || {
                format!("system {sys}: loaf {got} below cloud {brute}")
            })?;
        }
    }
    Ok(format!("200 targets, worst margin {worst:.2e}·r|τ|"))
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    let cfg = HullConfig::default();
    let mut direct = 0;
    for sys in 0..20 {
        let s = random_c_ifs(&mut rng);
        let r = ideal_bounding_circle(&s).map_err(|e| e.to_string())?.radius;
        let a = armadillo_hull(&s, &cfg).map_err(|e| format!("system {sys}: {e}"))?;
        let g = general_hull(&s, &cfg).map_err(|e| format!("system {sys}: {e}"))?;
        if a.method == Method::Armadillo {
            direct += 1;
        }
        ensure(same_points(&a.points(), &g.points(), 1e-7 * r), || {
            format!(
                "system {sys}: armadillo {} vs general {} vertices",
                a.extrema.len(),
                g.extrema.len()
            )
        })?;
    }
    for sys in 0..10 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=12);
        let angle = RationalAngle::new(rng.gen_range(0..m), m).unwrap();
        let maps = (0..n)
            .map(|_| {
                let p = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                Contraction::new(p, rng.gen_range(0.3..0.6), angle).unwrap()
            })
            .collect();
        let s = IfsSystem::new(maps).unwrap();
        let r = ideal_bounding_circle(&s).map_err(|e| e.to_string())?.radius;
        let e = equiangular_hull(&s, &cfg).map_err(|e| format!("equiangular {sys}: {e}"))?;
        let g = general_hull(&s, &cfg).map_err(|e| format!("equiangular {sys}: {e}"))?;
        ensure(
            same_points(&e.points(), &g.points(), 1e-7 * r.max(1e-300)),
            || {
                format!(
                    "equiangular {sys}: {} vs {} vertices",
                    e.extrema.len(),
                    g.extrema.len()
                )
            },
        )?;
    }
    Ok(format!("{direct}/20 without fallback, 10 equiangular"))
}

fn closure_and_containment(s: &IfsSystem, h: &HullResult) -> Result<(), String> {
    let r = ideal_bounding_circle(s).map_err(|e| e.to_string())?.radius;
    let tol = 1e-7 * r.max(1.0);
    let pts = h.points();
    for z in s.hutchinson(&pts) {
        ensure(in_polygon(&pts, z, tol), || {
            format!("image {z} escapes the hull")
        })?;
    }
    for e in &h.extrema {
        let Some(form) = &e.form else { continue };
        let b = form.prefix().indices();
        let x = form.period();
        let mut images: Vec<ComplexValue> = (0..b.len())
            .map(|i| {
                let c = Address::new(b[..i].to_vec());
                s.apply_inverse(&c, e.point).unwrap()
            })
            .collect();
        images.extend(cycle_points(s, x));
        for z in images {
            ensure(pts.iter().any(|q| (z - q).norm() <= tol), || {
                format!(
                    "closure: {z} from ({}, {x}) is not an extremum",
                    form.prefix()
                )
            })?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let mut systems = vec![levy(), twindragon(), example3()];
    for f in [
        include_str!("../../../data/sierpinski.ifs"),
        include_str!("../../../data/offset-bifractal.ifs"),
        include_str!("../../../data/bifractal-p8-q9.ifs"),
        include_str!("../../../data/bifractal-p5-q12.ifs"),
    ] {
        systems.push(system(f));
    }
    systems.extend((0..10).map(|_| random_c_ifs(&mut rng)));
    let mut checked = 0;
    for (i, s) in systems.iter().enumerate() {
        let h = compute_hull(s, MethodChoice::Auto, &HullConfig::default())
            .map_err(|e| format!("system {i}: {e}"))?;
        if h.verified {
            checked += 1;
            closure_and_containment(s, &h).map_err(|e| format!("system {i}: {e}"))?;
        }
    }
    ensure(checked == systems.len(), || {
        format!("only {checked}/{} verified", systems.len())
    })?;
    Ok(format!("{checked} verified hulls"))
}

fn criterion_10() -> Check {
    let mut rng = StdRng::seed_from_u64(10);
    for trial in 0..50 {
        let m = rng.gen_range(1..=60u64);
        let n = rng.gen_range(1..=4);
        let nums: Vec<u64> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        let mut seen = BTreeSet::from([0u64]);
        let mut frontier = vec![0u64];
        while let Some(v) = frontier.pop() {
            for &k in &nums {
                let w = (v + k) % m;
                if seen.insert(w) {
                    frontier.push(w);
                }
            }
        }
        let maps = nums
            .iter()
            .map(|&k| {
                Contraction::new(
                    c(k as f64, 0.0),
                    0.5,
                    RationalAngle::new(k as i64, m as i64).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let s = IfsSystem::new(maps).unwrap();
        let got = value_set_cardinality(&s);
        ensure(got == seen.len() as u64, || {
            format!("trial {trial}: N={nums:?} M={m}: {got} vs {}", seen.len())
        })?;
    }
    Ok("50 value sets".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Lévy C curve hull", criterion_1),
        ("Twindragon principal cycle", criterion_2),
        ("third example form", criterion_3),
        ("principal directions", criterion_4),
        ("heuristic period lengths", criterion_5),
        ("domination laws", criterion_6),
        ("maximizer beats point cloud", criterion_7),
        ("methods agree", criterion_8),
        ("verification and closure", criterion_9),
        ("value set cardinality", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
