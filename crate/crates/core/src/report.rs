//! Machine-readable reports: JSON for every command, CSV for hull vertices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::focality::{classify, value_set_cardinality, IrreducibleForm};
use crate::geometry::ComplexValue;
use crate::hull::{Extremum, HullResult};
use crate::ifs::IfsSystem;
use crate::loaf::{ideal_bounding_circle, BoundingCircle, MaximizerResult, Target};

#[derive(Serialize)]
struct Point {
    re: f64,
    im: f64,
}

impl From<ComplexValue> for Point {
    fn from(z: ComplexValue) -> Self {
        Point { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct Form {
    b: String,
    x: String,
}

impl Form {
    fn new(form: &IrreducibleForm, long: bool) -> Self {
        Form {
            b: form.prefix().to_index_string(long),
            x: form.period().to_index_string(long),
        }
    }
}

#[derive(Serialize)]
struct Vertex {
    re: f64,
    im: f64,
    form: Option<Form>,
}

impl Vertex {
    fn new(e: &Extremum, long: bool) -> Self {
        Vertex {
            re: e.point.re,
            im: e.point.im,
            form: e.form.as_ref().map(|f| Form::new(f, long)),
        }
    }
}

#[derive(Serialize)]
struct Circle {
    center: Point,
    radius: f64,
}

impl From<BoundingCircle> for Circle {
    fn from(c: BoundingCircle) -> Self {
        Circle {
            center: c.center.into(),
            radius: c.radius,
        }
    }
}

#[derive(Serialize)]
struct HullReport {
    method: &'static str,
    verified: bool,
    extrema: Vec<Vertex>,
    target: Option<Point>,
    principal: Option<Vertex>,
    value_set_cardinality: u64,
    bounding_circle: Circle,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct MaximizerEntry {
    re: f64,
    im: f64,
    value: f64,
    form: Form,
}

#[derive(Serialize)]
struct MaximizeReport {
    target: Point,
    maximizers: Vec<MaximizerEntry>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Class {
    sierpinski: bool,
    equiangular: bool,
    c_ifs: bool,
}

#[derive(Serialize)]
struct InfoReport {
    maps: usize,
    common_denominator: u64,
    numerators: Vec<u64>,
    value_set_cardinality: u64,
    class: Class,
    bounding_circle: Circle,
    termination_bound: u64,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))
}

/// Forms are written as digit strings, or comma-separated when `long` is set
/// or the system has more than nine maps.
pub fn hull_json(ifs: &IfsSystem, result: &HullResult, long: bool) -> Result<String> {
    let long = long || ifs.len() > 9;
    to_json(&HullReport {
        method: result.method.as_str(),
        verified: result.verified,
        extrema: result
            .extrema
            .iter()
            .map(|e| Vertex::new(e, long))
            .collect(),
        target: result.target_used.map(|t| t.direction().into()),
        principal: result.principal.as_ref().map(|e| Vertex::new(e, long)),
        value_set_cardinality: value_set_cardinality(ifs),
        bounding_circle: ideal_bounding_circle(ifs)?.into(),
        notes: result.notes.clone(),
    })
}

/// One `re,im,b,x` record per vertex; fields holding commas are quoted.
pub fn hull_csv(ifs: &IfsSystem, result: &HullResult, long: bool) -> Result<String> {
    let long = long || ifs.len() > 9;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for e in &result.extrema {
        let (b, x) = e
            .form
            .as_ref()
            .map(|f| {
                (
                    f.prefix().to_index_string(long),
                    f.period().to_index_string(long),
                )
            })
            .unwrap_or_default();
        w.write_record([e.point.re.to_string(), e.point.im.to_string(), b, x])
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

pub fn maximize_json(
    ifs: &IfsSystem,
    tau: &Target,
    result: &MaximizerResult,
    long: bool,
) -> Result<String> {
    let long = long || ifs.len() > 9;
    to_json(&MaximizeReport {
        target: tau.direction().into(),
        maximizers: result
            .maximizers
            .iter()
            .map(|m| MaximizerEntry {
                re: m.point.re,
                im: m.point.im,
                value: m.value,
                form: Form::new(&m.form, long),
            })
            .collect(),
        notes: result.notes.clone(),
    })
}

pub fn info_json(ifs: &IfsSystem) -> Result<String> {
    let class = classify(ifs);
    to_json(&InfoReport {
        maps: ifs.len(),
        common_denominator: ifs.common_den(),
        numerators: ifs.numerators().to_vec(),
        value_set_cardinality: class.value_set_size,
        class: Class {
            sierpinski: class.is_sierpinski,
            equiangular: class.is_equiangular,
            c_ifs: class.is_c_ifs,
        },
        bounding_circle: ideal_bounding_circle(ifs)?.into(),
        termination_bound: 2 * class.value_set_size,
    })
}
