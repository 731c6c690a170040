//! PAGE XML ground-truth parsing.
//!
//! Reads the `TextLine`/`Coords`/`TextEquiv` subset shared by the 2013+
//! PAGE schema versions, matching elements by local name so namespace
//! vintage differences do not matter.

use roxmltree::Document;

use crate::{Error, Raster, Result};

use super::LineRegion;

/// Parse PAGE XML into line regions, document order preserved.
///
/// Lines missing coordinates or transcription, or with out-of-bounds
/// polygons, are skipped and reported in the returned warnings list.
/// Malformed XML is a hard error carrying line/column.
pub fn parse_page_xml(xml: &str, page_image: &Raster) -> Result<(Vec<LineRegion>, Vec<String>)> {
    let doc = Document::parse(xml).map_err(|e| {
        let pos = e.pos();
        Error::XmlParse {
            line: pos.row,
            col: pos.col,
            message: e.to_string(),
        }
    })?;

    let mut regions = Vec::new();
    let mut warnings = Vec::new();

    for (idx, node) in doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "TextLine")
        .enumerate()
    {
        let label = node
            .attribute("id")
            .map(str::to_string)
            .unwrap_or_else(|| format!("TextLine #{}", idx + 1));

        let points = node
            .children()
            .find(|c| c.is_element() && c.tag_name().name() == "Coords")
            .and_then(|c| c.attribute("points"));
        let points = match points {
            Some(p) => p,
            None => {
                warnings.push(format!("{label}: missing Coords points, skipped"));
                continue;
            }
        };
        let polygon = match parse_points(points) {
            Ok(p) => p,
            Err(e) => {
                warnings.push(format!("{label}: {e}, skipped"));
                continue;
            }
        };
        if polygon.len() < 3 {
            warnings.push(format!(
                "{label}: polygon has {} points, need at least 3, skipped",
                polygon.len()
            ));
            continue;
        }
        if let Some(&(x, y)) = polygon.iter().find(|&&(x, y)| {
            x < 0 || y < 0 || x >= page_image.cols() as i64 || y >= page_image.rows() as i64
        }) {
            warnings.push(format!(
                "{label}: point ({x}, {y}) outside page bounds, skipped"
            ));
            continue;
        }

        // First Unicode child of the line's own TextEquiv (word-level
        // TextEquivs live deeper and are ignored).
        let text = node
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "TextEquiv")
            .flat_map(|te| te.children())
            .find(|c| c.is_element() && c.tag_name().name() == "Unicode")
            .and_then(|u| u.text())
            .unwrap_or("");
        if text.is_empty() {
            warnings.push(format!("{label}: missing transcription, skipped"));
            continue;
        }

        regions.push(LineRegion {
            polygon,
            text: text.to_string(),
        });
    }

    Ok((regions, warnings))
}

fn parse_points(points: &str) -> std::result::Result<Vec<(i64, i64)>, String> {
    points
        .split_whitespace()
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| format!("malformed point {pair:?}"))?;
            let parse = |v: &str| -> std::result::Result<i64, String> {
                v.trim()
                    .parse::<f64>()
                    .map(|f| f.round() as i64)
                    .map_err(|_| format!("malformed coordinate {v:?}"))
            };
            Ok((parse(x)?, parse(y)?))
        })
        .collect()
}
