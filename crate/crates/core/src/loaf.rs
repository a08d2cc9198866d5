//! Linear optimization over fractals of unity: bounding circle, domination,
//! Argmax pruning and the LOAF branch-and-bound search.

use crate::error::{domain, Error, Result};
use crate::focality::{blow_up, value_set_cardinality, IrreducibleForm, DEFAULT_NODE_CAP};
use crate::geometry::{inner, is_finite, ComplexValue};
use crate::ifs::{Address, IfsSystem};

/// A disk `B(c, r)` with `H(B) ⊂ B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingCircle {
    pub center: ComplexValue,
    pub radius: f64,
    /// All fixed points coincide; the attractor is the single point `center`.
    pub degenerate: bool,
}

impl BoundingCircle {
    pub fn contains(&self, z: ComplexValue, tol: f64) -> bool {
        (z - self.center).norm() <= self.radius + tol
    }
}

/// `c` is the mean of the fixed points and
/// `r = ν*/(1 - λ*) · max|p_k - c|` with `λ* = max|φ_k|`, `ν* = max|1 - φ_k|`.
pub fn ideal_bounding_circle(ifs: &IfsSystem) -> Result<BoundingCircle> {
    let fixed = ifs.fixed_points();
    let center = fixed.iter().sum::<ComplexValue>() / fixed.len() as f64;
    let spread = fixed
        .iter()
        .map(|p| (p - center).norm())
        .fold(0.0, f64::max);
    let lambda_star = ifs.maps().iter().map(|m| m.lambda()).fold(0.0, f64::max);
    let nu_star = ifs
        .maps()
        .iter()
        .map(|m| (1.0 - m.factor()).norm())
        .fold(0.0, f64::max);
    let radius = nu_star / (1.0 - lambda_star) * spread;
    let circle = BoundingCircle {
        center,
        radius,
        degenerate: radius == 0.0,
    };
    let slack = 1e-12 * radius.max(center.norm()).max(1.0);
    for (k, m) in ifs.maps().iter().enumerate() {
        if (m.apply(center) - center).norm() + m.lambda() * radius > radius + slack {
            return Err(Error::Internal(format!(
                "bounding circle is not invariant under map {}",
                k + 1
            )));
        }
    }
    Ok(circle)
}

/// A nonzero target direction `τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Target(ComplexValue);

impl Target {
    pub fn new(direction: ComplexValue) -> Result<Self> {
        if !is_finite(direction) || direction.norm() == 0.0 {
            return domain(format!(
                "target direction must be finite and nonzero, got {direction}"
            ));
        }
        Ok(Target(direction))
    }

    pub fn direction(&self) -> ComplexValue {
        self.0
    }

    /// `⟨τ, z⟩`.
    pub fn value(&self, z: ComplexValue) -> f64 {
        inner(self.0, z)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `τ` rotated by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Target {
        Target(self.0 * ComplexValue::from_polar(1.0, angle))
    }
}

/// `a ≻ b` iff `|a| = |b|` and `⟨τ, T_a(c) - T_b(c)⟩ ≥ λ_b·r·|τ|`.
pub fn dominates(
    tau: &Target,
    ifs: &IfsSystem,
    circle: &BoundingCircle,
    a: &Address,
    b: &Address,
) -> Result<bool> {
    if a.len() != b.len() {
        return domain(format!(
            "domination compares addresses of equal length, got {} and {}",
            a.len(),
            b.len()
        ));
    }
    let ta = ifs.apply(a, circle.center)?;
    let tb = ifs.apply(b, circle.center)?;
    let lb = ifs.lambda_of(b)?;
    Ok(tau.value(ta - tb) >= lb * circle.radius * tau.norm())
}

/// Relative safety margin on the Argmax comparison.
pub const ARGMAX_MARGIN: f64 = 1e-12;

/// Keeps every address whose disk reaches past the best center value.
pub fn argmax_step(
    tau: &Target,
    ifs: &IfsSystem,
    circle: &BoundingCircle,
    addrs: &[Address],
) -> Result<Vec<Address>> {
    let Some(first) = addrs.first() else {
        return domain("argmax of an empty address set");
    };
    if addrs.iter().any(|a| a.len() != first.len()) {
        return domain("argmax needs addresses of equal length");
    }
    let scored = addrs
        .iter()
        .map(|a| Ok((tau.value(ifs.apply(a, circle.center)?), ifs.lambda_of(a)?)))
        .collect::<Result<Vec<_>>>()?;
    let scale = circle.radius * tau.norm();
    let best = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(addrs
        .iter()
        .zip(&scored)
        .filter(|(_, (v, l))| v + l * scale > best - ARGMAX_MARGIN * scale)
        .map(|(a, _)| a.clone())
        .collect())
}

/// Tolerances and caps for the search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoafConfig {
    /// Cap on address-tree nodes created.
    pub node_cap: usize,
    /// Co-maximizers differ by at most `tie_tol·r·|τ|` in target value.
    pub tie_tol: f64,
    /// Points closer than `point_tol·r` are the same point.
    pub point_tol: f64,
}

impl Default for LoafConfig {
    fn default() -> Self {
        LoafConfig {
            node_cap: DEFAULT_NODE_CAP,
            tie_tol: 1e-9,
            point_tol: 1e-9,
        }
    }
}

/// One maximizing form.
#[derive(Clone, Debug, PartialEq)]
pub struct Maximizer {
    pub form: IrreducibleForm,
    pub point: ComplexValue,
    pub value: f64,
}

/// One or two maximizers, plus diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximizerResult {
    pub maximizers: Vec<Maximizer>,
    pub notes: Vec<String>,
}

impl MaximizerResult {
    pub fn is_unique(&self) -> bool {
        self.maximizers.len() == 1
    }
}

struct Node {
    parent: u32,
    map: u32,
    value: u64,
}

struct Live {
    node: u32,
    lambda: f64,
    center: ComplexValue,
    /// `T_a(p_j)` for every map `j`.
    images: Vec<ComplexValue>,
}

const ROOT: u32 = u32::MAX;

fn path_of(arena: &[Node], mut node: u32) -> Vec<usize> {
    let mut path = Vec::new();
    while node != ROOT {
        path.push(arena[node as usize].map as usize);
        node = arena[node as usize].parent;
    }
    path.reverse();
    path
}

/// Depth of the ancestor of `node` (itself included) whose value is `v`, if any.
fn ancestor_with_value(arena: &[Node], mut node: u32, v: u64, depth: usize) -> Option<usize> {
    let mut d = depth;
    while node != ROOT {
        if arena[node as usize].value == v {
            return Some(d);
        }
        node = arena[node as usize].parent;
        d -= 1;
    }
    (v == 0).then_some(0)
}

/// LOAF: subdivides the attractor along the address tree, pruning subfractals
/// whose bounding disk cannot reach the best known value, and freezing every
/// address as soon as it is blowable. Returns the best frozen blow-up(s).
pub fn loaf(tau: &Target, ifs: &IfsSystem, config: &LoafConfig) -> Result<MaximizerResult> {
    let circle = ideal_bounding_circle(ifs)?;
    let mut notes = Vec::new();
    let card = value_set_cardinality(ifs);

    if circle.degenerate {
        let a = Address::repeat(0, card as usize + 1);
        let (form, point) = blow_up(ifs, &a)?
            .ok_or_else(|| Error::Internal("degenerate blow-up missing".into()))?;
        return Ok(MaximizerResult {
            maximizers: vec![Maximizer {
                form,
                point,
                value: tau.value(point),
            }],
            notes,
        });
    }

    let n = ifs.len();
    let m = ifs.common_den();
    let nums = ifs.numerators();
    let factors: Vec<ComplexValue> = ifs.maps().iter().map(|t| t.factor()).collect();
    let lambdas: Vec<f64> = ifs.maps().iter().map(|t| t.lambda()).collect();
    let scale = circle.radius * tau.norm();
    let max_depth = 2 * card as usize + 2;

    let mut arena: Vec<Node> = Vec::new();
    let mut frozen: Vec<Maximizer> = Vec::new();
    let mut frozen_best = f64::NEG_INFINITY;
    let mut live = vec![Live {
        node: ROOT,
        lambda: 1.0,
        center: circle.center,
        images: ifs.fixed_points(),
    }];
    let mut depth = 0usize;

    while !live.is_empty() {
        if depth >= max_depth {
            return Err(Error::Internal(format!(
                "search reached depth {depth} with {} unblown addresses",
                live.len()
            )));
        }
        depth += 1;
        let mut children: Vec<(Live, f64)> = Vec::with_capacity(live.len() * n);
        for parent in &live {
            let parent_value = if parent.node == ROOT {
                0
            } else {
                arena[parent.node as usize].value
            };
            for k in 0..n {
                if arena.len() >= config.node_cap {
                    return Err(Error::Resource(format!(
                        "search exceeded {} nodes at depth {depth}",
                        config.node_cap
                    )));
                }
                let v = (parent_value + nums[k]) % m;
                let anchor = parent.images[k];
                let phi = factors[k];
                if let Some(i) = ancestor_with_value(&arena, parent.node, v, depth - 1) {
                    let mut a = path_of(&arena, parent.node);
                    a.push(k);
                    let px = ifs.periodic_unchecked(&a[i..]);
                    let point = ifs.compose_unchecked(&a[..i], px);
                    let value = tau.value(point);
                    frozen_best = frozen_best.max(value);
                    frozen.push(Maximizer {
                        form: IrreducibleForm::new_unchecked(
                            Address::new(a[..i].to_vec()),
                            Address::new(a[i..].to_vec()),
                        ),
                        point,
                        value,
                    });
                    continue;
                }
                arena.push(Node {
                    parent: parent.node,
                    map: k as u32,
                    value: v,
                });
                let center = anchor + phi * (parent.center - anchor);
                let images = parent
                    .images
                    .iter()
                    .map(|&q| anchor + phi * (q - anchor))
                    .collect();
                let child = Live {
                    node: (arena.len() - 1) as u32,
                    lambda: parent.lambda * lambdas[k],
                    center,
                    images,
                };
                let cv = tau.value(center);
                children.push((child, cv));
            }
        }
        if depth == 1 {
            live = children.into_iter().map(|(c, _)| c).collect();
            continue;
        }
        let best = children.iter().map(|c| c.1).fold(frozen_best, f64::max);
        live = children
            .into_iter()
            .filter(|(c, v)| v + c.lambda * scale > best - ARGMAX_MARGIN * scale)
            .map(|(c, _)| c)
            .collect();
    }

    if frozen.is_empty() {
        return Err(Error::Internal("search ended without a blow-up".into()));
    }
    frozen.sort_by(|a, b| {
        a.form
            .len()
            .cmp(&b.form.len())
            .then_with(|| a.form.cmp(&b.form))
    });
    let tie = config.tie_tol * scale;
    let mut tied: Vec<Maximizer> = Vec::new();
    for f in frozen {
        if f.value < frozen_best - tie {
            continue;
        }
        match tied
            .iter()
            .find(|t| (t.point - f.point).norm() <= config.point_tol * circle.radius)
        {
            Some(t) if t.form != f.form => notes.push(format!(
                "forms ({}, {}) and ({}, {}) give the same maximizing point",
                t.form.prefix(),
                t.form.period(),
                f.form.prefix(),
                f.form.period()
            )),
            Some(_) => {}
            None => tied.push(f),
        }
    }
    if tied.len() > 2 {
        notes.push(format!(
            "{} tied maximizers; keeping the two extremes along the edge",
            tied.len()
        ));
        let along = Target(tau.direction() * ComplexValue::new(0.0, 1.0));
        let (mut lo, mut hi) = (0, 0);
        for (i, t) in tied.iter().enumerate() {
            if along.value(t.point) < along.value(tied[lo].point) {
                lo = i;
            }
            if along.value(t.point) > along.value(tied[hi].point) {
                hi = i;
            }
        }
        let (lo, hi) = (tied[lo].clone(), tied[hi].clone());
        tied = vec![hi, lo];
    }
    Ok(MaximizerResult {
        maximizers: tied,
        notes,
    })
}

/// `ν`-prefix scan used to double check a returned form.
#[cfg(test)]
pub(crate) fn is_minimal_blow_up(ifs: &IfsSystem, form: &IrreducibleForm) -> bool {
    let mut a = form.prefix().indices().to_vec();
    a.extend_from_slice(form.period().indices());
    crate::focality::first_repeat(ifs, &a) == Some((form.prefix().len(), a.len()))
}
