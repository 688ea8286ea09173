//! Point-in-polygon country attribution over a GeoJSON-style boundary file.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::GeoPoint;
use crate::distances::geo_distance;
use crate::error::{Error, Result};

/// Points farther than this from every boundary vertex stay unresolved.
pub const FALLBACK_RADIUS_KM: f64 = 25.0;

/// One polygon of a country. `rings[0]` is the outer ring; any further rings
/// are holes and are not consulted by [`resolve_country`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountryBoundary {
    pub country: String,
    pub rings: Vec<Vec<GeoPoint>>,
}

impl CountryBoundary {
    pub fn new(country: impl Into<String>, rings: Vec<Vec<GeoPoint>>) -> Result<Self> {
        let country = country.into();
        if rings.is_empty() {
            return Err(Error::Invalid(format!("boundary for {country} has no rings")));
        }
        for ring in &rings {
            if ring.len() < 4 || ring.first() != ring.last() {
                return Err(Error::Invalid(format!(
                    "boundary ring for {country} must be closed with at least 4 points"
                )));
            }
        }
        Ok(CountryBoundary { country, rings })
    }

    pub fn outer(&self) -> &[GeoPoint] {
        &self.rings[0]
    }
}

#[derive(Deserialize)]
struct FeatureCollection {
    features: Vec<Feature>,
}

#[derive(Deserialize)]
struct Feature {
    properties: Value,
    geometry: Geometry,
}

#[derive(Deserialize)]
#[serde(tag = "type", content = "coordinates")]
enum Geometry {
    Polygon(Vec<Vec<[f64; 2]>>),
    MultiPolygon(Vec<Vec<Vec<[f64; 2]>>>),
}

fn to_rings(path: &Path, polygon: Vec<Vec<[f64; 2]>>) -> Result<Vec<Vec<GeoPoint>>> {
    polygon
        .into_iter()
        .map(|ring| {
            ring.into_iter()
                .map(|[lon, lat]| GeoPoint::new(lat, lon).map_err(|e| Error::format(path, e.to_string())))
                .collect()
        })
        .collect()
}

/// Loads a feature collection of `Polygon`/`MultiPolygon` features, each
/// carrying an `iso3` property. A multipolygon yields one boundary per part,
/// in file order.
pub fn load_boundaries(path: &Path) -> Result<Vec<CountryBoundary>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let collection: FeatureCollection = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    let mut out = Vec::new();
    for feature in collection.features {
        let code = feature
            .properties
            .get("iso3")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::format(path, "feature without an iso3 property"))?
            .to_ascii_uppercase();
        let polygons = match feature.geometry {
            Geometry::Polygon(p) => vec![p],
            Geometry::MultiPolygon(m) => m,
        };
        for polygon in polygons {
            let rings = to_rings(path, polygon)?;
            out.push(CountryBoundary::new(code.clone(), rings).map_err(|e| Error::format(path, e.to_string()))?);
        }
    }
    Ok(out)
}

fn on_segment(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> bool {
    let (px, py) = (p.longitude, p.latitude);
    let (ax, ay) = (a.longitude, a.latitude);
    let (bx, by) = (b.longitude, b.latitude);
    let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    let scale = (bx - ax).abs().max((by - ay).abs()).max(1.0);
    if cross.abs() > 1e-12 * scale {
        return false;
    }
    px >= ax.min(bx) && px <= ax.max(bx) && py >= ay.min(by) && py <= ay.max(by)
}

/// Even-odd ray cast in the (longitude, latitude) plane. Points on an edge or
/// vertex count as inside.
pub fn ring_contains(ring: &[GeoPoint], point: GeoPoint) -> bool {
    if ring.windows(2).any(|w| on_segment(point, w[0], w[1])) {
        return true;
    }
    let (x, y) = (point.longitude, point.latitude);
    let mut inside = false;
    for w in ring.windows(2) {
        let (xi, yi) = (w[0].longitude, w[0].latitude);
        let (xj, yj) = (w[1].longitude, w[1].latitude);
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
    }
    inside
}

/// Code of the first boundary whose outer ring contains `point`; failing
/// that, the owner of the nearest boundary vertex within
/// [`FALLBACK_RADIUS_KM`].
pub fn resolve_country(point: GeoPoint, boundaries: &[CountryBoundary]) -> Option<String> {
    if let Some(b) = boundaries.iter().find(|b| ring_contains(b.outer(), point)) {
        return Some(b.country.clone());
    }
    let mut best: Option<(f64, &str)> = None;
    for boundary in boundaries {
        for vertex in boundary.outer() {
            let d = geo_distance(point, *vertex);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, &boundary.country));
            }
        }
    }
    best.filter(|(d, _)| *d <= FALLBACK_RADIUS_KM)
        .map(|(_, code)| code.to_string())
}
