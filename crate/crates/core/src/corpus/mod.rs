//! Ground-truth corpus handling: line samples, PAGE XML ingestion,
//! artificial page assembly, balanced selection and fold splitting.

mod manifest;
mod page_xml;

pub use manifest::{load_corpus, save_corpus};
pub use page_xml::parse_page_xml;

use serde::{Deserialize, Serialize};

use crate::rng::DetRng;
use crate::{Error, Raster, Result};

/// Preprocessing variant of a line raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Raw,
    Bin,
    Nrm,
    Sauvola,
    Wolf,
    Augmented,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Raw => "raw",
            Variant::Bin => "bin",
            Variant::Nrm => "nrm",
            Variant::Sauvola => "sauvola",
            Variant::Wolf => "wolf",
            Variant::Augmented => "augmented",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "raw" => Variant::Raw,
            "bin" => Variant::Bin,
            "nrm" => Variant::Nrm,
            "sauvola" => Variant::Sauvola,
            "wolf" => Variant::Wolf,
            "augmented" => Variant::Augmented,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown variant {other:?} (expected raw|bin|nrm|sauvola|wolf|augmented)"
                )))
            }
        })
    }
}

/// One text-line image variant paired with its normalized transcription.
#[derive(Debug, Clone)]
pub struct LineSample {
    pub image: Raster,
    pub transcription: String,
    pub work_id: String,
    pub page_id: String,
    pub line_id: String,
    pub variant: Variant,
    pub selected: bool,
}

impl LineSample {
    /// Identity of the underlying physical line, shared by its variants.
    pub fn line_key(&self) -> (String, String, String) {
        (
            self.work_id.clone(),
            self.page_id.clone(),
            self.line_id.clone(),
        )
    }
}

/// One source work and its line samples.
#[derive(Debug, Clone, Default)]
pub struct WorkEntry {
    pub work_id: String,
    pub tags: Vec<String>,
    pub lines: Vec<LineSample>,
}

/// The full ground-truth collection.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub works: Vec<WorkEntry>,
}

impl Corpus {
    pub fn total_lines(&self) -> usize {
        self.works.iter().map(|w| w.lines.len()).sum()
    }

    pub fn all_lines(&self) -> impl Iterator<Item = &LineSample> {
        self.works.iter().flat_map(|w| w.lines.iter())
    }

    /// Checks the `(work, page, line, variant)` uniqueness invariant.
    pub fn validate_unique(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for work in &self.works {
            for line in &work.lines {
                let key = (
                    work.work_id.as_str(),
                    line.page_id.as_str(),
                    line.line_id.as_str(),
                    line.variant,
                );
                if !seen.insert(key) {
                    return Err(Error::InvalidInput(format!(
                        "duplicate sample {}/{}/{} variant {}",
                        work.work_id,
                        line.page_id,
                        line.line_id,
                        line.variant.as_str()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A line's polygon outline and raw transcription, in page coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRegion {
    pub polygon: Vec<(i64, i64)>,
    pub text: String,
}

fn on_segment(px: i64, py: i64, (x1, y1): (i64, i64), (x2, y2): (i64, i64)) -> bool {
    let cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1);
    if cross != 0 {
        return false;
    }
    (x1.min(x2)..=x1.max(x2)).contains(&px) && (y1.min(y2)..=y1.max(y2)).contains(&py)
}

/// Even-odd point-in-polygon with the boundary counting as inside.
/// Exact integer arithmetic throughout.
pub(crate) fn point_in_polygon(px: i64, py: i64, polygon: &[(i64, i64)]) -> bool {
    let n = polygon.len();
    for i in 0..n {
        if on_segment(px, py, polygon[i], polygon[(i + 1) % n]) {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (x1, y1) = polygon[i];
        let (x2, y2) = polygon[(i + 1) % n];
        if (y1 > py) != (y2 > py) {
            // px < x1 + (py-y1)(x2-x1)/(y2-y1), via cross-multiplication
            let dy = (y2 - y1) as i128;
            let lhs = (px - x1) as i128 * dy;
            let rhs = (py - y1) as i128 * (x2 - x1) as i128;
            if (dy > 0 && lhs < rhs) || (dy < 0 && lhs > rhs) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Crop a line region to its polygon bounding box; pixels outside the
/// polygon are filled white.
pub fn extract_line(page: &Raster, region: &LineRegion) -> Result<Raster> {
    if region.polygon.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "polygon has {} points, need at least 3",
            region.polygon.len()
        )));
    }
    for &(x, y) in &region.polygon {
        if x < 0 || y < 0 || x >= page.cols() as i64 || y >= page.rows() as i64 {
            return Err(Error::InvalidInput(format!(
                "polygon point ({x}, {y}) outside page bounds {}x{}",
                page.rows(),
                page.cols()
            )));
        }
    }
    let min_x = region.polygon.iter().map(|p| p.0).min().unwrap();
    let max_x = region.polygon.iter().map(|p| p.0).max().unwrap();
    let min_y = region.polygon.iter().map(|p| p.1).min().unwrap();
    let max_y = region.polygon.iter().map(|p| p.1).max().unwrap();
    let rows = (max_y - min_y + 1) as usize;
    let cols = (max_x - min_x + 1) as usize;
    let mut out = Raster::white(rows, cols);
    for y in min_y..=max_y {
        for x in min_x..=max_x {
            if point_in_polygon(x, y, &region.polygon) {
                out.set(
                    (y - min_y) as usize,
                    (x - min_x) as usize,
                    page.get(y as usize, x as usize),
                );
            }
        }
    }
    Ok(out)
}

/// Build an artificial page by stacking lines vertically with a white gap.
/// Returns the page and one rectangular region per pasted line.
pub fn concat_lines_to_page(lines: &[LineSample], gap: usize) -> Result<(Raster, Vec<LineRegion>)> {
    if lines.is_empty() {
        return Err(Error::InvalidInput(
            "cannot build a page from zero lines".into(),
        ));
    }
    if let Some(l) = lines.iter().find(|l| l.variant != lines[0].variant) {
        return Err(Error::InvalidInput(format!(
            "page lines must share a variant: {} vs {}",
            lines[0].variant.as_str(),
            l.variant.as_str()
        )));
    }
    let width = lines.iter().map(|l| l.image.cols()).max().unwrap();
    let height: usize =
        lines.iter().map(|l| l.image.rows()).sum::<usize>() + gap * (lines.len() - 1);
    let mut page = Raster::white(height, width);
    let mut regions = Vec::with_capacity(lines.len());
    let mut y = 0usize;
    for line in lines {
        let (h, w) = (line.image.rows(), line.image.cols());
        for r in 0..h {
            for c in 0..w {
                page.set(y + r, c, line.image.get(r, c));
            }
        }
        let (y0, y1) = (y as i64, (y + h - 1) as i64);
        let x1 = (w - 1) as i64;
        regions.push(LineRegion {
            polygon: vec![(0, y0), (x1, y0), (x1, y1), (0, y1)],
            text: line.transcription.clone(),
        });
        y += h + gap;
    }
    Ok((page, regions))
}

/// Flag up to `cap` lines per work as the balanced subset. The choice is a
/// deterministic function of `(seed, work_id)`: adding or reordering other
/// works never changes a work's selection. Variants of one line share the
/// flag and count once toward the cap.
pub fn select_balanced(mut corpus: Corpus, cap: usize, seed: u64) -> Result<Corpus> {
    if cap == 0 {
        return Err(Error::InvalidInput("balance cap must be at least 1".into()));
    }
    for work in &mut corpus.works {
        let mut keys: Vec<(String, String)> = work
            .lines
            .iter()
            .map(|l| (l.page_id.clone(), l.line_id.clone()))
            .collect();
        keys.sort();
        keys.dedup();
        let mut rng = DetRng::stream(seed, &["select_balanced", &work.work_id], &[]);
        rng.shuffle(&mut keys);
        let chosen: std::collections::HashSet<_> =
            keys.into_iter().take(cap).collect();
        for line in &mut work.lines {
            line.selected = chosen.contains(&(line.page_id.clone(), line.line_id.clone()));
        }
    }
    Ok(corpus)
}

/// Train/validation index pair for one fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Partition `0..n` into `k` folds from a seeded shuffle. Validation
/// shards are near-equal, pairwise disjoint and exhaustive; the remainder
/// goes to the earliest folds.
pub fn split_folds_indices(n: usize, k: usize, seed: u64) -> Result<Vec<FoldIndices>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need k >= 2 folds, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidInput(format!(
            "cannot split {n} samples into {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    DetRng::stream(seed, &["split_folds"], &[k as u64]).shuffle(&mut order);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut offset = 0usize;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        let validation = order[offset..offset + size].to_vec();
        let train = order[..offset]
            .iter()
            .chain(order[offset + size..].iter())
            .copied()
            .collect();
        folds.push(FoldIndices { train, validation });
        offset += size;
    }
    Ok(folds)
}

/// Convenience wrapper cloning samples into per-fold train/validation sets.
pub fn split_folds<T: Clone>(samples: &[T], k: usize, seed: u64) -> Result<Vec<(Vec<T>, Vec<T>)>> {
    let folds = split_folds_indices(samples.len(), k, seed)?;
    Ok(folds
        .into_iter()
        .map(|f| {
            (
                f.train.iter().map(|&i| samples[i].clone()).collect(),
                f.validation.iter().map(|&i| samples[i].clone()).collect(),
            )
        })
        .collect())
}
