//! Address values, system classification, blow-ups and eventually focal
//! point sets.

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{dedup_indices, ComplexValue};
use crate::ifs::{Address, IfsSystem};

/// Default cap on visited address-tree nodes.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// A pair `(b, x)` with `ν(x) = 0`, `x ≠ 0`, representing the point `T_b(p_x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleForm {
    prefix: Address,
    period: Address,
}

impl IrreducibleForm {
    /// Checks `x ≠ 0`, `ν(x) = 0` and index ranges.
    pub fn new(ifs: &IfsSystem, prefix: Address, period: Address) -> Result<Self> {
        ifs.validate(&prefix)?;
        if period.is_empty() {
            return Err(Error::Domain("form period must be nonempty".into()));
        }
        if !ifs.is_focal(&period)? {
            return Err(Error::Domain(format!("form period {period} is not focal")));
        }
        Ok(IrreducibleForm { prefix, period })
    }

    pub(crate) fn new_unchecked(prefix: Address, period: Address) -> Self {
        IrreducibleForm { prefix, period }
    }

    /// `b`.
    pub fn prefix(&self) -> &Address {
        &self.prefix
    }

    /// `x`.
    pub fn period(&self) -> &Address {
        &self.period
    }

    /// `|bx|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `T_b(p_x)`.
    pub fn point(&self, ifs: &IfsSystem) -> Result<ComplexValue> {
        let px = ifs.periodic_point(&self.period)?;
        ifs.apply(&self.prefix, px)
    }
}

/// Exact classification flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemClass {
    pub is_sierpinski: bool,
    pub is_equiangular: bool,
    pub is_c_ifs: bool,
    pub value_set_size: u64,
}

/// `|ν(𝒜_fin)| = M / gcd(N_1, …, N_n, M)`.
pub fn value_set_cardinality(ifs: &IfsSystem) -> u64 {
    let m = ifs.common_den();
    let g = ifs.numerators().iter().fold(m, |g, &n| g.gcd(&n));
    m / g
}

pub fn classify(ifs: &IfsSystem) -> SystemClass {
    let nums = ifs.numerators();
    let is_sierpinski = nums.iter().all(|&n| n == 0);
    let is_equiangular = nums.iter().all(|&n| n == nums[0]);
    let is_c_ifs = ifs.len() == 2 && {
        let (a1, a2) = (ifs.map(0).angle(), ifs.map(1).angle());
        // ϑ₁ ∈ (-π, 0), ϑ₂ ∈ (0, π), |ϑ₁| ≤ ϑ₂
        a1.num() < 0
            && a2.num() > 0
            && 2 * a2.num() < a2.den()
            && a1.cmp_abs(&a2) != std::cmp::Ordering::Greater
    };
    SystemClass {
        is_sierpinski,
        is_equiangular,
        is_c_ifs,
        value_set_size: value_set_cardinality(ifs),
    }
}

/// Splits `a` at the first repeated prefix value: returns `(i, j)` with
/// `ν(a[..i]) = ν(a[..j])`, `j` minimal.
pub(crate) fn first_repeat(ifs: &IfsSystem, a: &[usize]) -> Option<(usize, usize)> {
    let m = ifs.common_den();
    let nums = ifs.numerators();
    let mut seen: HashMap<u64, usize> = HashMap::with_capacity(a.len() + 1);
    seen.insert(0, 0);
    let mut v = 0u64;
    for (idx, &k) in a.iter().enumerate() {
        v = (v + nums[k]) % m;
        let j = idx + 1;
        if let Some(&i) = seen.get(&v) {
            return Some((i, j));
        }
        seen.insert(v, j);
    }
    None
}

/// The blow-up of `a`: the shortest `bx ≤ a` with `ν(x) = 0`, and `T_b(p_x)`.
pub fn blow_up(ifs: &IfsSystem, a: &Address) -> Result<Option<(IrreducibleForm, ComplexValue)>> {
    ifs.validate(a)?;
    Ok(first_repeat(ifs, a.indices()).map(|(i, j)| {
        let form = IrreducibleForm::new_unchecked(a.slice(0..i), a.slice(i..j));
        let p = ifs.compose_unchecked(
            &a.indices()[..i],
            ifs.periodic_unchecked(&a.indices()[i..j]),
        );
        (form, p)
    }))
}

/// The shortest form describing the same infinite address `b x x x …`:
/// `x` is cut to its shortest focal power of its primitive root, and trailing
/// letters of `b` are absorbed by rotating `x`.
pub fn reduce_form(ifs: &IfsSystem, form: &IrreducibleForm) -> IrreducibleForm {
    let x = form.period.indices();
    let root_len = (1..=x.len())
        .filter(|&d| x.len().is_multiple_of(d))
        .find(|&d| x.chunks(d).all(|c| c == &x[..d]))
        .unwrap_or(x.len());
    let root = &x[..root_len];
    let mut period = Vec::new();
    loop {
        period.extend_from_slice(root);
        if ifs.value_unchecked(&period) == 0 {
            break;
        }
    }
    let mut prefix = form.prefix.indices().to_vec();
    while let (Some(&last_b), Some(&last_x)) = (prefix.last(), period.last()) {
        if last_b != last_x {
            break;
        }
        prefix.pop();
        period.rotate_right(1);
    }
    IrreducibleForm::new_unchecked(Address::new(prefix), Address::new(period))
}

/// `EFoc_L`: blow-ups of all length-`L` addresses, found by a depth-first
/// walk that stops each branch at its first blowable node. Deduplicated by
/// form, then by point within `tol`.
pub fn efoc_level(
    ifs: &IfsSystem,
    level: usize,
    node_cap: usize,
    tol: f64,
) -> Result<Vec<(IrreducibleForm, ComplexValue)>> {
    if level == 0 {
        return Ok(Vec::new());
    }
    let n = ifs.len();
    let m = ifs.common_den();
    let nums = ifs.numerators();
    let mut found: Vec<IrreducibleForm> = Vec::new();
    let mut visited = 0usize;
    // path[d] = map index at depth d+1, values[d] = ν of the prefix of length d
    let mut path: Vec<usize> = Vec::with_capacity(level);
    let mut values: Vec<u64> = vec![0];
    let mut position: HashMap<u64, usize> = HashMap::from([(0, 0)]);
    let mut next: Vec<usize> = vec![0];

    while let Some(k) = next.last_mut() {
        if *k == n {
            next.pop();
            if path.pop().is_some() {
                let v = values.pop().expect("value stack");
                position.remove(&v);
            }
            continue;
        }
        let map = *k;
        *k += 1;
        visited += 1;
        if visited > node_cap {
            return Err(Error::Resource(format!(
                "address tree exceeded {node_cap} nodes at level {level}"
            )));
        }
        let v = (values[values.len() - 1] + nums[map]) % m;
        if let Some(&i) = position.get(&v) {
            let mut x = path[i..].to_vec();
            x.push(map);
            found.push(IrreducibleForm::new_unchecked(
                Address::new(path[..i].to_vec()),
                Address::new(x),
            ));
        } else if path.len() + 1 < level {
            path.push(map);
            values.push(v);
            position.insert(v, path.len());
            next.push(0);
        }
    }

    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found.dedup();
    let points: Vec<ComplexValue> = found
        .iter()
        .map(|f| {
            ifs.compose_unchecked(
                f.prefix.indices(),
                ifs.periodic_unchecked(f.period.indices()),
            )
        })
        .collect();
    Ok(dedup_indices(&points, tol)
        .into_iter()
        .map(|i| (found[i].clone(), points[i]))
        .collect())
}
