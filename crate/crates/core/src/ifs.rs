//! IFS data model: similarity contractions, systems with an exact common
//! angle denominator, addresses and the maps they denote.

use std::fmt;

use num_integer::Integer;

use crate::error::{domain, Error, Result};
use crate::geometry::{is_finite, ComplexValue, RationalAngle};

/// `T(z) = p + φ(z - p)` with `φ = λ·e^{iϑ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    fixed_point: ComplexValue,
    lambda: f64,
    angle: RationalAngle,
    factor: ComplexValue,
}

impl Contraction {
    pub fn new(fixed_point: ComplexValue, lambda: f64, angle: RationalAngle) -> Result<Self> {
        if !is_finite(fixed_point) {
            return domain(format!("fixed point {fixed_point} is not finite"));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return domain(format!(
                "contraction factor must lie in (0, 1), got {lambda}"
            ));
        }
        let factor = ComplexValue::from_polar(lambda, angle.radians());
        Ok(Contraction {
            fixed_point,
            lambda,
            angle,
            factor,
        })
    }

    pub fn fixed_point(&self) -> ComplexValue {
        self.fixed_point
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn angle(&self) -> RationalAngle {
        self.angle
    }

    /// The complex factor `φ`.
    pub fn factor(&self) -> ComplexValue {
        self.factor
    }

    #[inline]
    pub fn apply(&self, z: ComplexValue) -> ComplexValue {
        self.fixed_point + self.factor * (z - self.fixed_point)
    }

    #[inline]
    pub fn apply_inverse(&self, z: ComplexValue) -> ComplexValue {
        self.fixed_point + (z - self.fixed_point) / self.factor
    }

    /// Same factor, new fixed point.
    pub fn with_fixed_point(&self, fixed_point: ComplexValue) -> Self {
        Contraction {
            fixed_point,
            ..self.clone()
        }
    }
}

/// A finite word over the map indices. Stored 0-based; rendered 1-based.
/// The empty address is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn identity() -> Self {
        Address(Vec::new())
    }

    /// From 0-based map indices.
    pub fn new(indices: Vec<usize>) -> Self {
        Address(indices)
    }

    /// From 1-based map indices, as written in the literature.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        indices
            .iter()
            .map(|&k| {
                k.checked_sub(1)
                    .ok_or_else(|| Error::Domain("address indices start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Address)
    }

    /// `k` repeated `times` times (0-based `k`).
    pub fn repeat(k: usize, times: usize) -> Self {
        Address(vec![k; times])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Address) -> Address {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Address(v)
    }

    pub fn push(&mut self, k: usize) {
        self.0.push(k);
    }

    /// `x(j+1..) x(..j)`.
    pub fn rotate_left(&self, j: usize) -> Address {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let j = j % v.len();
            v.rotate_left(j);
        }
        Address(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Address {
        Address(self.0[range].to_vec())
    }

    /// 1-based rendering. Digits when every index is at most 9, otherwise
    /// (or when `long` is set) comma-separated numbers.
    pub fn to_index_string(&self, long: bool) -> String {
        if long || self.0.iter().any(|&k| k >= 9) {
            self.0
                .iter()
                .map(|k| (k + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        } else {
            self.0.iter().map(|k| char::from(b'1' + *k as u8)).collect()
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&k| k >= n) {
            Some(k) => domain(format!("address index {} out of range 1..={n}", k + 1)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_index_string(false))
    }
}

/// An IFS with its rotation angles expressed over the common denominator `M`
/// as numerators `N_k ∈ [0, M)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IfsSystem {
    maps: Vec<Contraction>,
    common_den: u64,
    numerators: Vec<u64>,
}

impl IfsSystem {
    pub fn new(maps: Vec<Contraction>) -> Result<Self> {
        if maps.is_empty() {
            return domain("an IFS needs at least one map");
        }
        let mut common_den: u64 = 1;
        for m in &maps {
            common_den = common_den.lcm(&(m.angle.den() as u64));
            if common_den > 1 << 40 {
                return domain("common angle denominator is unreasonably large");
            }
        }
        let numerators = maps
            .iter()
            .map(|m| m.angle.numerator_over(common_den))
            .collect();
        Ok(IfsSystem {
            maps,
            common_den,
            numerators,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[Contraction] {
        &self.maps
    }

    pub fn map(&self, k: usize) -> &Contraction {
        &self.maps[k]
    }

    /// `M`, the LCM of the angle denominators.
    pub fn common_den(&self) -> u64 {
        self.common_den
    }

    /// `N_k` with `ϑ_k = 2π N_k / M`.
    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn fixed_points(&self) -> Vec<ComplexValue> {
        self.maps.iter().map(Contraction::fixed_point).collect()
    }

    pub fn validate(&self, a: &Address) -> Result<()> {
        a.check(self.len())
    }

    pub(crate) fn compose_unchecked(&self, a: &[usize], z: ComplexValue) -> ComplexValue {
        a.iter().rev().fold(z, |z, &k| self.maps[k].apply(z))
    }

    /// `T_a(z) = T_{a(1)} ∘ … ∘ T_{a(|a|)}(z)`; the last index acts first.
    pub fn apply(&self, a: &Address, z: ComplexValue) -> Result<ComplexValue> {
        self.validate(a)?;
        Ok(self.compose_unchecked(a.indices(), z))
    }

    /// `T_a^{-1}(z)`.
    pub fn apply_inverse(&self, a: &Address, z: ComplexValue) -> Result<ComplexValue> {
        self.validate(a)?;
        Ok(a.indices()
            .iter()
            .fold(z, |z, &k| self.maps[k].apply_inverse(z)))
    }

    /// The slope `φ_a` of `T_a`.
    pub fn factor_of(&self, a: &Address) -> Result<ComplexValue> {
        self.validate(a)?;
        Ok(self.factor_unchecked(a.indices()))
    }

    pub(crate) fn factor_unchecked(&self, a: &[usize]) -> ComplexValue {
        a.iter().fold(ComplexValue::new(1.0, 0.0), |acc, &k| {
            acc * self.maps[k].factor
        })
    }

    /// `|φ_a|` as a product of contraction factors.
    pub fn lambda_of(&self, a: &Address) -> Result<f64> {
        self.validate(a)?;
        Ok(a.indices().iter().map(|&k| self.maps[k].lambda).product())
    }

    /// The exact total rotation of `T_a` as a numerator over `M`.
    pub fn value_of(&self, a: &Address) -> Result<u64> {
        self.validate(a)?;
        Ok(self.value_unchecked(a.indices()))
    }

    pub(crate) fn value_unchecked(&self, a: &[usize]) -> u64 {
        let m = self.common_den;
        a.iter()
            .fold(0u64, |acc, &k| (acc + self.numerators[k]) % m)
    }

    pub fn is_focal(&self, a: &Address) -> Result<bool> {
        Ok(self.value_of(a)? == 0)
    }

    /// Focal and every map index occurs.
    pub fn is_strictly_focal(&self, a: &Address) -> Result<bool> {
        if !self.is_focal(a)? {
            return Ok(false);
        }
        let mut seen = vec![false; self.len()];
        for &k in a.indices() {
            seen[k] = true;
        }
        Ok(seen.into_iter().all(|s| s))
    }

    /// Fixed point of `T_x`, evaluated as `T_x(0) / (1 - φ_x)`.
    pub fn periodic_point(&self, x: &Address) -> Result<ComplexValue> {
        if x.is_empty() {
            return domain("periodic point of the empty address");
        }
        self.validate(x)?;
        Ok(self.periodic_unchecked(x.indices()))
    }

    pub(crate) fn periodic_unchecked(&self, x: &[usize]) -> ComplexValue {
        let offset = self.compose_unchecked(x, ComplexValue::new(0.0, 0.0));
        offset / (1.0 - self.factor_unchecked(x))
    }

    /// All rotations of `x` with their periodic points, starting with `x`.
    /// Rotation `j+1` is `T_{x(j)}^{-1}` applied to rotation `j`.
    pub fn cycle_of(&self, x: &Address) -> Result<Vec<(Address, ComplexValue)>> {
        if x.is_empty() {
            return domain("cycle of the empty address");
        }
        self.validate(x)?;
        Ok((0..x.len())
            .map(|j| {
                let r = x.rotate_left(j);
                let p = self.periodic_unchecked(r.indices());
                (r, p)
            })
            .collect())
    }

    /// `∪_k T_k(points)`, concatenated map by map.
    pub fn hutchinson(&self, points: &[ComplexValue]) -> Vec<ComplexValue> {
        self.maps
            .iter()
            .flat_map(|m| points.iter().map(move |&z| m.apply(z)))
            .collect()
    }

    /// `{T_a(p_seed) : |a| = level}`, `n^level` points with duplicates.
    pub fn point_cloud(&self, seed: usize, level: u32, cap: usize) -> Result<Vec<ComplexValue>> {
        if seed >= self.len() {
            return domain(format!(
                "seed index {} out of range 1..={}",
                seed + 1,
                self.len()
            ));
        }
        let total = self.len().checked_pow(level).filter(|&t| t <= cap);
        if total.is_none() {
            return Err(Error::Resource(format!(
                "point cloud of {}^{level} points exceeds the cap of {cap}",
                self.len()
            )));
        }
        let mut pts = vec![self.maps[seed].fixed_point];
        for _ in 0..level {
            pts = self.hutchinson(&pts);
        }
        Ok(pts)
    }
}

/// The similarity `N(z) = (z - p₁)/(p₂ - p₁)` taking a bifractal to normal form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalMap {
    origin: ComplexValue,
    scale: ComplexValue,
}

impl NormalMap {
    pub fn forward(&self, z: ComplexValue) -> ComplexValue {
        (z - self.origin) / self.scale
    }

    pub fn inverse(&self, z: ComplexValue) -> ComplexValue {
        self.origin + z * self.scale
    }

    /// Carries a target direction from normal-form coordinates back to the
    /// original plane so that target values are preserved up to a constant.
    pub fn inverse_direction(&self, tau: ComplexValue) -> ComplexValue {
        tau * self.scale / self.scale.norm_sqr()
    }

    pub fn is_identity(&self) -> bool {
        self.origin == ComplexValue::new(0.0, 0.0) && self.scale == ComplexValue::new(1.0, 0.0)
    }
}

/// Moves the fixed points of a two-map system to 0 and 1, keeping the factors.
pub fn normalize_bifractal(ifs: &IfsSystem) -> Result<(IfsSystem, NormalMap)> {
    if ifs.len() != 2 {
        return Err(Error::Unsupported(format!(
            "normal form needs exactly two maps, got {}",
            ifs.len()
        )));
    }
    let (p1, p2) = (ifs.maps[0].fixed_point, ifs.maps[1].fixed_point);
    if p1 == p2 {
        return Err(Error::Degenerate("both maps share a fixed point".into()));
    }
    let nm = NormalMap {
        origin: p1,
        scale: p2 - p1,
    };
    let maps = vec![
        ifs.maps[0].with_fixed_point(ComplexValue::new(0.0, 0.0)),
        ifs.maps[1].with_fixed_point(ComplexValue::new(1.0, 0.0)),
    ];
    Ok((
        IfsSystem {
            maps,
            common_den: ifs.common_den,
            numerators: ifs.numerators.clone(),
        },
        nm,
    ))
}
