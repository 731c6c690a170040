//! Corpus directory layout: a JSON manifest plus 8-bit grayscale PNGs.
//!
//! ```text
//! <dir>/manifest.json
//! <dir>/rasters/<work>/<page>/<line>.<variant>.png
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Raster, Result};

use super::{Corpus, LineSample, Variant, WorkEntry};

#[derive(Serialize, Deserialize)]
struct ManifestDoc {
    version: u32,
    works: Vec<ManifestWork>,
}

#[derive(Serialize, Deserialize)]
struct ManifestWork {
    work_id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
    pages: Vec<ManifestPage>,
}

#[derive(Serialize, Deserialize)]
struct ManifestPage {
    page_id: String,
    lines: Vec<ManifestLine>,
}

#[derive(Serialize, Deserialize)]
struct ManifestLine {
    line_id: String,
    transcription: String,
    #[serde(default)]
    selected: bool,
    /// variant name -> relative raster path
    rasters: BTreeMap<String, String>,
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Write the manifest and all line rasters under `dir`.
pub fn save_corpus(corpus: &Corpus, dir: &Path) -> Result<()> {
    corpus.validate_unique()?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut works = Vec::new();
    for work in &corpus.works {
        let mut pages: Vec<ManifestPage> = Vec::new();
        for line in &work.lines {
            let page = match pages.iter_mut().find(|p| p.page_id == line.page_id) {
                Some(p) => p,
                None => {
                    pages.push(ManifestPage {
                        page_id: line.page_id.clone(),
                        lines: Vec::new(),
                    });
                    pages.last_mut().unwrap()
                }
            };
            let entry = match page.lines.iter_mut().find(|l| l.line_id == line.line_id) {
                Some(l) => l,
                None => {
                    page.lines.push(ManifestLine {
                        line_id: line.line_id.clone(),
                        transcription: line.transcription.clone(),
                        selected: false,
                        rasters: BTreeMap::new(),
                    });
                    page.lines.last_mut().unwrap()
                }
            };
            entry.selected |= line.selected;
            let rel = format!(
                "rasters/{}/{}/{}.{}.png",
                sanitize(&work.work_id),
                sanitize(&line.page_id),
                sanitize(&line.line_id),
                line.variant.as_str()
            );
            let abs = dir.join(&rel);
            if let Some(parent) = abs.parent() {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            line.image.save(&abs)?;
            entry
                .rasters
                .insert(line.variant.as_str().to_string(), rel);
        }
        works.push(ManifestWork {
            work_id: work.work_id.clone(),
            tags: work.tags.clone(),
            pages,
        });
    }
    let doc = ManifestDoc { version: 1, works };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&doc)?;
    std::fs::write(&path, json).map_err(|e| Error::io(path, e))
}

/// Load a corpus previously written with [`save_corpus`].
pub fn load_corpus(dir: &Path) -> Result<Corpus> {
    let path = dir.join("manifest.json");
    let json = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let doc: ManifestDoc = serde_json::from_str(&json)?;
    if doc.version != 1 {
        return Err(Error::InvalidInput(format!(
            "unsupported manifest version {}",
            doc.version
        )));
    }
    let mut corpus = Corpus::default();
    for work in doc.works {
        let mut entry = WorkEntry {
            work_id: work.work_id.clone(),
            tags: work.tags,
            lines: Vec::new(),
        };
        for page in work.pages {
            for line in page.lines {
                for (variant, rel) in &line.rasters {
                    let image = Raster::load(&dir.join(rel))?;
                    entry.lines.push(LineSample {
                        image,
                        transcription: line.transcription.clone(),
                        work_id: work.work_id.clone(),
                        page_id: page.page_id.clone(),
                        line_id: line.line_id.clone(),
                        variant: Variant::parse(variant)?,
                        selected: line.selected,
                    });
                }
            }
        }
        corpus.works.push(entry);
    }
    corpus.validate_unique()?;
    Ok(corpus)
}
