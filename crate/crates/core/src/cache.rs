//! On-disk cache of restriction tables.
//!
//! One text file per (shape, orientation):
//!
//! ```text
//! qk-comin restriction cache v1
//! shape <shape>
//! orientation <opposite|plain>
//! torus <equivariant|one-parameter>
//! checksum <sha256 of the body, hex>
//! <index> <fixed point> <Laurent element>
//! ...
//! ```
//!
//! Only nonzero restrictions are recorded; records follow the canonical
//! (length, one-line) order of indices and fixed points. A file whose header
//! or checksum does not match is ignored and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gkm::{Orientation, RestrictionTable, Torus};
use crate::laurent::Laurent;
use crate::weyl::{FlagShape, Permutation};

const MAGIC: &str = "qk-comin restriction cache v1";

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "QK_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub files: usize,
    pub bytes: u64,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// `$QK_CACHE_DIR`, else the platform cache directory under `qk-comin/`.
    pub fn default_location() -> Option<Self> {
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
            return Some(DiskCache::new(dir));
        }
        dirs::cache_dir().map(|d| DiskCache::new(d.join("qk-comin")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_for(&self, shape: &FlagShape, orientation: Orientation, torus: Torus) -> PathBuf {
        self.dir.join(format!("{}-{}-{}.v1.txt", shape.slug(), orientation.name(), torus.name()))
    }

    pub fn load(
        &self,
        shape: &FlagShape,
        orientation: Orientation,
        torus: Torus,
        points: &[Permutation],
    ) -> Option<RestrictionTable> {
        let text = fs::read_to_string(self.file_for(shape, orientation, torus)).ok()?;
        parse_table(&text, shape, orientation, torus, points).ok()
    }

    pub fn store(&self, shape: &FlagShape, table: &RestrictionTable, torus: Torus, points: &[Permutation]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = render_table(shape, table, torus, points);
        let path = self.file_for(shape, table.orientation(), torus);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn clear(&self) -> Result<usize> {
        let mut removed = 0;
        if !self.dir.exists() {
            return Ok(0);
        }
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "txt") {
                fs::remove_file(path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }

    pub fn stats(&self) -> Result<CacheStats> {
        let mut stats = CacheStats::default();
        if !self.dir.exists() {
            return Ok(stats);
        }
        for entry in fs::read_dir(&self.dir)? {
            let entry = entry?;
            if entry.path().extension().is_some_and(|e| e == "txt") {
                stats.files += 1;
                stats.bytes += entry.metadata()?.len();
            }
        }
        Ok(stats)
    }
}

fn render_body(table: &RestrictionTable, points: &[Permutation]) -> String {
    let mut body = String::new();
    for (i, row) in table.rows().iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            if !value.is_zero() {
                body.push_str(&format!("{} {} {}\n", points[i], points[j], value));
            }
        }
    }
    body
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

pub(crate) fn render_table(shape: &FlagShape, table: &RestrictionTable, torus: Torus, points: &[Permutation]) -> String {
    let body = render_body(table, points);
    format!(
        "{MAGIC}\nshape {shape}\norientation {}\ntorus {}\nchecksum {}\n{body}",
        table.orientation().name(),
        torus.name(),
        checksum(&body)
    )
}

pub(crate) fn parse_table(
    text: &str,
    shape: &FlagShape,
    orientation: Orientation,
    torus: Torus,
    points: &[Permutation],
) -> Result<RestrictionTable> {
    let bad = |msg: &str| Error::Cache(format!("{shape} {}: {msg}", orientation.name()));
    let mut lines = text.splitn(6, '\n');
    if lines.next() != Some(MAGIC) {
        return Err(bad("version header mismatch"));
    }
    if lines.next() != Some(format!("shape {shape}").as_str()) {
        return Err(bad("shape mismatch"));
    }
    if lines.next() != Some(format!("orientation {}", orientation.name()).as_str()) {
        return Err(bad("orientation mismatch"));
    }
    if lines.next() != Some(format!("torus {}", torus.name()).as_str()) {
        return Err(bad("torus mismatch"));
    }
    let sum = lines
        .next()
        .and_then(|l| l.strip_prefix("checksum "))
        .ok_or_else(|| bad("missing checksum"))?;
    let body = lines.next().unwrap_or("");
    if checksum(body) != sum {
        return Err(bad("checksum mismatch"));
    }
    let n = torus.nvars(shape.n());
    let index: std::collections::HashMap<&Permutation, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut rows = vec![vec![Laurent::zero(n); points.len()]; points.len()];
    for line in body.lines() {
        let mut parts = line.splitn(3, ' ');
        let (w, v, val) = match (parts.next(), parts.next(), parts.next()) {
            (Some(w), Some(v), Some(val)) => (w, v, val),
            _ => return Err(bad("truncated record")),
        };
        let w: Permutation = w.parse()?;
        let v: Permutation = v.parse()?;
        let (&i, &j) = match (index.get(&w), index.get(&v)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(bad("unknown fixed point")),
        };
        rows[i][j] = Laurent::parse(val, n)?;
    }
    Ok(RestrictionTable::new(orientation, rows))
}
