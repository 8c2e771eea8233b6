//! Input files: vertex stars, spherical polygons and chord diagrams as JSON,
//! meshes as OFF.

use std::path::Path;

use gaussmap::chord::ChordDiagram;
use gaussmap::sphere::SphericalPolygon;
use gaussmap::star::VertexStar;
use serde_json::Value;

use crate::Failure;

pub enum Input {
    Star(VertexStar),
    Polygon(SphericalPolygon),
    Diagram(ChordDiagram),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Star(_) => "star",
            Input::Polygon(_) => "polygon",
            Input::Diagram(_) => "diagram",
        }
    }
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Failure {
    Failure::Lib(gaussmap::Error::ParseError(format!("{}: {msg}", path.display())))
}

fn polygon_from(path: &Path, v: Value) -> Result<SphericalPolygon, Failure> {
    let pts: Vec<[f64; 3]> = serde_json::from_value(v).map_err(|e| parse_err(path, e))?;
    Ok(SphericalPolygon::from_points(&pts)?)
}

/// A star has "center", a diagram has "pi", a polygon is a bare array of
/// points or an object with "vertices".
pub fn read_input(path: &Path) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    match v {
        Value::Array(_) => Ok(Input::Polygon(polygon_from(path, v)?)),
        Value::Object(mut map) => {
            if map.contains_key("center") {
                serde_json::from_value(Value::Object(map))
                    .map(Input::Star)
                    .map_err(|e| parse_err(path, e))
            } else if map.contains_key("pi") {
                serde_json::from_value(Value::Object(map))
                    .map(Input::Diagram)
                    .map_err(|e| parse_err(path, e))
            } else if let Some(vs) = map.remove("vertices") {
                Ok(Input::Polygon(polygon_from(path, vs)?))
            } else {
                Err(parse_err(
                    path,
                    "expected a star (\"center\"), a diagram (\"pi\") or a polygon",
                ))
            }
        }
        _ => Err(parse_err(path, "expected a JSON array or object")),
    }
}

pub fn wrong_kind(got: &Input, want: &str) -> Failure {
    Failure::Usage(format!("expected {want} input, got a {}", got.kind()))
}
