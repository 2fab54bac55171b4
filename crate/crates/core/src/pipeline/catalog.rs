//! Catalog directories.
//!
//! A catalog directory holds one Cayley-table text file per entry and a
//! `manifest.tsv`:
//!
//! ```text
//! #variety bruck
//! #order 27
//! #prime 3
//! #refused 4 coset space has 3^24 elements, above the limit 100000000
//! #checksum <sha256 hex>
//! 1<TAB>000001.txt<TAB><fingerprint hash><TAB><factor id><TAB><orbit hash>
//! ```
//!
//! `<TAB>` stands for a tab character. The checksum covers the entry lines
//! and the entry files, in id order.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::cocycle::Variety;
use crate::correspond::quandle_to_bruck;
use crate::error::{Error, Result};
use crate::iso::{isomorphism, IsoProfile, LoopFingerprint};
use crate::loops::text::{parse, ParsedTable};
use crate::loops::{LoopTable, Magma};

pub const MANIFEST: &str = "manifest.tsv";

/// What a catalog contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogKind {
    Bruck,
    CommutativeAutomorphic,
    Quandle,
}

impl CatalogKind {
    pub fn name(self) -> &'static str {
        match self {
            CatalogKind::Bruck => "bruck",
            CatalogKind::CommutativeAutomorphic => "ca",
            CatalogKind::Quandle => "quandle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bruck" => Ok(CatalogKind::Bruck),
            "ca" => Ok(CatalogKind::CommutativeAutomorphic),
            "quandle" => Ok(CatalogKind::Quandle),
            other => Err(Error::Argument(format!("unknown variety {other:?}"))),
        }
    }

    /// The loop variety enumerated to produce this kind of catalog.
    pub fn loop_variety(self) -> Variety {
        match self {
            CatalogKind::Bruck | CatalogKind::Quandle => Variety::Bruck,
            CatalogKind::CommutativeAutomorphic => Variety::CommutativeAutomorphic,
        }
    }
}

impl std::fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: usize,
    pub table: ParsedTable,
    /// Hex hash of the entry's loop fingerprint; for quandles, of the
    /// associated Bruck loop at base point 0.
    pub fingerprint: String,
    /// Id of the factor in the previous level's catalog (0 at order `p`).
    pub factor_id: usize,
    /// Hash of the representative cocycle the entry was built from.
    pub orbit_hash: String,
}

impl CatalogEntry {
    /// The entry as a loop: itself, or the Bruck loop of a quandle.
    pub fn as_loop(&self) -> Result<LoopTable> {
        match &self.table {
            ParsedTable::Loop(l) => Ok(l.clone()),
            ParsedTable::Quandle(q) => quandle_to_bruck(q, 0),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{:06}.txt", self.id)
    }
}

/// A refused factor and the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refusal {
    pub factor_id: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub kind: CatalogKind,
    pub order: usize,
    pub prime: u32,
    pub refused: Vec<Refusal>,
    pub entries: Vec<CatalogEntry>,
}

/// Entries matched between two catalogs by isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogDiff {
    pub matched: Vec<(usize, usize)>,
    pub only_left: Vec<usize>,
    pub only_right: Vec<usize>,
}

impl CatalogDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.refused.is_empty()
    }

    /// All entries as loops (quandles through their Bruck loops).
    pub fn loops(&self) -> Result<Vec<LoopTable>> {
        self.entries.iter().map(CatalogEntry::as_loop).collect()
    }

    fn entry_line(e: &CatalogEntry) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\n",
            e.id,
            e.file_name(),
            e.fingerprint,
            e.factor_id,
            e.orbit_hash
        )
    }

    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.entries {
            h.update(Self::entry_line(e).as_bytes());
        }
        for e in &self.entries {
            h.update(e.table.to_text().as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn manifest(&self) -> String {
        let mut out = format!(
            "#variety {}\n#order {}\n#prime {}\n",
            self.kind, self.order, self.prime
        );
        for r in &self.refused {
            out.push_str(&format!("#refused {} {}\n", r.factor_id, r.reason));
        }
        out.push_str(&format!("#checksum {}\n", self.checksum()));
        for e in &self.entries {
            out.push_str(&Self::entry_line(e));
        }
        out
    }

    /// Writes the catalog into `dir`, replacing an existing manifest. Entry
    /// files are written first and the manifest last, each atomically.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for e in &self.entries {
            write_atomic(&dir.join(e.file_name()), &e.table.to_text())?;
        }
        write_atomic(&dir.join(MANIFEST), &self.manifest())
    }

    /// Reads a catalog and checks its checksum.
    pub fn load(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST))?;
        let mut kind = None;
        let mut order = None;
        let mut prime = None;
        let mut checksum = None;
        let mut refused = Vec::new();
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest.split_once(' ').unwrap_or((rest, ""));
                match key {
                    "variety" => kind = Some(CatalogKind::parse(value)?),
                    "order" => order = value.parse::<usize>().ok(),
                    "prime" => prime = value.parse::<u32>().ok(),
                    "checksum" => checksum = Some(value.to_string()),
                    "refused" => {
                        let (id, reason) = value.split_once(' ').unwrap_or((value, ""));
                        let Ok(factor_id) = id.parse() else {
                            return parse_err(ln, "bad refused factor id");
                        };
                        refused.push(Refusal {
                            factor_id,
                            reason: reason.to_string(),
                        });
                    }
                    _ => return parse_err(ln, format!("unknown header {key:?}")),
                }
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, file, fingerprint, factor, orbit] = fields.as_slice() else {
                return parse_err(ln, "expected 5 tab-separated fields");
            };
            let (Ok(id), Ok(factor_id)) = (id.parse::<usize>(), factor.parse::<usize>()) else {
                return parse_err(ln, "bad id or factor id");
            };
            if id != entries.len() + 1 {
                return parse_err(ln, format!("ids must be dense, found {id}"));
            }
            let table = parse(&fs::read_to_string(dir.join(file))?)?;
            let entry = CatalogEntry {
                id,
                table,
                fingerprint: fingerprint.to_string(),
                factor_id,
                orbit_hash: orbit.to_string(),
            };
            if entry.file_name() != *file {
                return parse_err(ln, format!("entry file should be {}", entry.file_name()));
            }
            entries.push(entry);
        }
        let (Some(kind), Some(order), Some(prime), Some(checksum)) = (kind, order, prime, checksum) else {
            return parse_err(1, "manifest lacks #variety, #order, #prime or #checksum");
        };
        let catalog = Catalog {
            kind,
            order,
            prime,
            refused,
            entries,
        };
        if catalog.checksum() != checksum {
            return Err(Error::Internal("manifest checksum does not match the catalog".into()));
        }
        if let Some(e) = catalog.entries.iter().find(|e| e.table_order() != order) {
            return Err(Error::Internal(format!("entry {} has the wrong order", e.id)));
        }
        let wants_quandle = kind == CatalogKind::Quandle;
        if let Some(e) = catalog
            .entries
            .iter()
            .find(|e| matches!(e.table, ParsedTable::Quandle(_)) != wants_quandle)
        {
            return Err(Error::Internal(format!("entry {} has the wrong table kind", e.id)));
        }
        Ok(catalog)
    }

    /// Recomputes fingerprints, checks variety membership and pairwise
    /// non-isomorphism.
    pub fn verify(&self) -> Result<()> {
        let loops = self.loops()?;
        for (e, q) in self.entries.iter().zip(&loops) {
            if LoopFingerprint::new(q).hash_hex() != e.fingerprint {
                return Err(Error::Internal(format!("entry {} has a stale fingerprint", e.id)));
            }
            if !self.kind.loop_variety().contains(q) {
                return Err(Error::Internal(format!("entry {} is not in the variety", e.id)));
            }
        }
        let profiles: Vec<IsoProfile> = loops.iter().map(IsoProfile::new).collect();
        for i in 0..profiles.len() {
            for j in 0..i {
                if isomorphism(&profiles[i], &profiles[j]).is_some() {
                    return Err(Error::Internal(format!(
                        "entries {} and {} are isomorphic",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Matches entries of two catalogs up to isomorphism.
    pub fn diff(&self, other: &Catalog) -> Result<CatalogDiff> {
        let left = self.loops()?;
        let right = other.loops()?;
        let lp: Vec<IsoProfile> = left.iter().map(IsoProfile::new).collect();
        let rp: Vec<IsoProfile> = right.iter().map(IsoProfile::new).collect();
        let mut used = vec![false; rp.len()];
        let mut diff = CatalogDiff::default();
        for (i, a) in lp.iter().enumerate() {
            let hit = (0..rp.len()).find(|&j| !used[j] && isomorphism(a, &rp[j]).is_some());
            match hit {
                Some(j) => {
                    used[j] = true;
                    diff.matched.push((i + 1, j + 1));
                }
                None => diff.only_left.push(i + 1),
            }
        }
        diff.only_right = (0..rp.len()).filter(|&j| !used[j]).map(|j| j + 1).collect();
        Ok(diff)
    }
}

impl CatalogEntry {
    fn table_order(&self) -> usize {
        match &self.table {
            ParsedTable::Loop(l) => l.order(),
            ParsedTable::Quandle(q) => q.order(),
        }
    }
}

/// Writes via a temporary file and a rename.
pub(crate) fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
