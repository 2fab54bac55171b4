//! Level-by-level enumeration with optional on-disk checkpoints.

use std::fs;
use std::path::{Path, PathBuf};

use super::catalog::{write_atomic, Catalog, CatalogEntry, CatalogKind, Refusal};
use super::classify::{
    filter_extensions, keep_extension, orbit_hash, representatives, CocycleSpaces, FactorIndex,
};
use crate::cocycle::{extension, Cocycle, Variety};
use crate::correspond::{bruck_to_quandle, quandle_to_bruck};
use crate::error::{arg, Error, Result};
use crate::gf::{Fp, QuotientSpace, RrefBasis};
use crate::iso::LoopFingerprint;
use crate::loops::text::ParsedTable;
use crate::loops::{LoopTable, Magma};
use crate::symmetry::OrbitRepresentative;

/// The catalog at order 1: the trivial loop, whose extensions are `Z_p`.
pub fn trivial_catalog(kind: CatalogKind, prime: u32) -> Catalog {
    let one = LoopTable::cyclic(1);
    Catalog {
        kind: match kind {
            CatalogKind::Quandle => CatalogKind::Bruck,
            k => k,
        },
        order: 1,
        prime,
        refused: Vec::new(),
        entries: vec![CatalogEntry {
            id: 1,
            fingerprint: LoopFingerprint::new(&one).hash_hex(),
            table: ParsedTable::Loop(one),
            factor_id: 0,
            orbit_hash: "-".into(),
        }],
    }
}

/// Checkpoint files under a job directory. Every write counts as one
/// checkpoint; the optional stop hook raises [`Error::Interrupted`] once
/// the count is reached.
struct Store {
    root: PathBuf,
    writes: usize,
    stop_after: Option<usize>,
}

impl Store {
    fn read(&self, key: &str) -> Result<Option<String>> {
        match fs::read_to_string(self.root.join(key)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn write(&mut self, key: &str, content: &str) -> Result<()> {
        let path = self.root.join(key);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        write_atomic(&path, content)?;
        self.checkpoint()
    }

    fn checkpoint(&mut self) -> Result<()> {
        self.writes += 1;
        match self.stop_after {
            Some(n) if self.writes >= n => Err(Error::Interrupted(self.writes)),
            _ => Ok(()),
        }
    }
}

enum Orbits {
    Refused(String),
    Found(Vec<OrbitRepresentative>),
}

fn orbits_to_text(o: &Orbits) -> String {
    match o {
        Orbits::Refused(r) => format!("refused {r}\n"),
        Orbits::Found(reps) => reps.iter().map(|r| format!("{} {}\n", r.index, r.orbit_size)).collect(),
    }
}

fn orbits_from_text(text: &str, f: &LoopTable, spaces: &CocycleSpaces) -> Result<Orbits> {
    if let Some(r) = text.strip_prefix("refused ") {
        return Ok(Orbits::Refused(r.trim_end().to_string()));
    }
    let space = QuotientSpace::new(&spaces.cocycles, &spaces.coboundaries)?;
    let fp = spaces.cocycles.field();
    let mut reps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let bad = || Error::Parse {
            line: i + 1,
            msg: "expected `index size`".into(),
        };
        let (a, b) = line.split_once(' ').ok_or_else(bad)?;
        let index: u64 = a.parse().map_err(|_| bad())?;
        let orbit_size: u64 = b.parse().map_err(|_| bad())?;
        reps.push(OrbitRepresentative {
            cocycle: Cocycle::from_vector(f.order(), fp, space.coset(index))?,
            index,
            orbit_size,
        });
    }
    Ok(Orbits::Found(reps))
}

/// Classification result of one factor: the kept extensions with their
/// orbit hashes, or a refusal.
enum FactorResult {
    Refused(String),
    Kept(Vec<(LoopTable, String)>),
}

fn classify_factor(
    f: &LoopTable,
    fp: Fp,
    v: Variety,
    limit: u64,
    store: &mut Option<&mut Store>,
    key: &str,
) -> Result<FactorResult> {
    let load = |store: &Option<&mut Store>, name: &str| -> Result<Option<String>> {
        match store {
            Some(s) => s.read(&format!("{key}/{name}")),
            None => Ok(None),
        }
    };
    let cached = (load(store, "cocycles.gfbasis")?, load(store, "coboundaries.gfbasis")?);
    let spaces = match cached {
        (Some(c), Some(b)) => CocycleSpaces {
            cocycles: RrefBasis::from_text(&c)?,
            coboundaries: RrefBasis::from_text(&b)?,
        },
        _ => {
            let spaces = CocycleSpaces::compute(f, fp, v)?;
            if let Some(s) = store.as_deref_mut() {
                s.write(&format!("{key}/coboundaries.gfbasis"), &spaces.coboundaries.to_text())?;
                s.write(&format!("{key}/cocycles.gfbasis"), &spaces.cocycles.to_text())?;
            }
            spaces
        }
    };
    let orbits = match load(store, "orbits.txt")? {
        Some(text) => orbits_from_text(&text, f, &spaces)?,
        None => {
            let o = match representatives(f, &spaces, limit) {
                Ok(reps) => Orbits::Found(reps),
                Err(Error::Refused(r)) => Orbits::Refused(r),
                Err(e) => return Err(e),
            };
            if let Some(s) = store.as_deref_mut() {
                s.write(&format!("{key}/orbits.txt"), &orbits_to_text(&o))?;
            }
            o
        }
    };
    let reps = match orbits {
        Orbits::Refused(r) => return Ok(FactorResult::Refused(r)),
        Orbits::Found(reps) => reps,
    };
    let kept: Vec<usize> = match load(store, "filtered.txt")? {
        Some(text) => text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line: 1, msg: "bad index".into() }))
            .collect::<Result<_>>()?,
        None => {
            let (kept, _, _) = filter_extensions(f, v, &reps)?;
            if let Some(s) = store.as_deref_mut() {
                let line: Vec<String> = kept.iter().map(|k| k.to_string()).collect();
                s.write(&format!("{key}/filtered.txt"), &(line.join(" ") + "\n"))?;
            }
            kept
        }
    };
    let loops = kept
        .iter()
        .map(|&k| {
            let r = reps.get(k).ok_or_else(|| Error::Internal("kept index out of range".into()))?;
            Ok((extension(f, &r.cocycle)?, orbit_hash(r)))
        })
        .collect::<Result<_>>()?;
    Ok(FactorResult::Kept(loops))
}

fn run_level(
    fp: Fp,
    factors: &Catalog,
    limit: u64,
    mut store: Option<&mut Store>,
    prefix: &str,
) -> Result<Catalog> {
    if !factors.is_complete() {
        return Err(Error::Refused(format!(
            "factor catalog of order {} is incomplete ({} refused factors)",
            factors.order,
            factors.refused.len()
        )));
    }
    if factors.prime != fp.p() as u32 {
        return arg("factor catalog was built for a different prime");
    }
    let kind = factors.kind;
    let v = kind.loop_variety();
    let p = fp.modulus();
    let factor_loops = factors.loops()?;
    let mut refused = Vec::new();
    let mut per_factor: Vec<Vec<(LoopTable, String)>> = Vec::new();
    for (i, f) in factor_loops.iter().enumerate() {
        let key = format!("{prefix}/factor-{}", i + 1);
        match classify_factor(f, fp, v, limit, &mut store, &key)? {
            FactorResult::Refused(reason) => {
                refused.push(Refusal {
                    factor_id: i + 1,
                    reason,
                });
                per_factor.push(Vec::new());
            }
            FactorResult::Kept(loops) => per_factor.push(loops),
        }
    }
    let is_refused: Vec<bool> = (1..=factor_loops.len())
        .map(|id| refused.iter().any(|r| r.factor_id == id))
        .collect();
    let index = FactorIndex::new(&factor_loops);
    let mut found: Vec<(Vec<u8>, usize, usize, LoopTable, String, String)> = Vec::new();
    for (i, loops) in per_factor.into_iter().enumerate() {
        for (j, (q, hash)) in loops.into_iter().enumerate() {
            if keep_extension(&q, p, i, &index, &is_refused)? {
                let fpr = LoopFingerprint::new(&q);
                found.push((fpr.to_bytes(), i + 1, j, q, fpr.hash_hex(), hash));
            }
        }
    }
    found.sort_by(|a, b| (&a.0, a.1, a.2).cmp(&(&b.0, b.1, b.2)));
    let entries = found
        .into_iter()
        .enumerate()
        .map(|(k, (_, factor_id, _, q, fingerprint, orbit_hash))| CatalogEntry {
            id: k + 1,
            table: ParsedTable::Loop(q),
            fingerprint,
            factor_id,
            orbit_hash,
        })
        .collect();
    Ok(Catalog {
        kind,
        order: factors.order * p,
        prime: factors.prime,
        refused,
        entries,
    })
}

/// One level of the enumeration: all loops of order `p·|F|` in the
/// variety of `factors` that are central extensions of `Z_p` by a factor,
/// up to isomorphism.
///
/// Factors are processed in id order. An extension of factor `i` is
/// dropped when one of its quotients by a central subgroup of order `p` is
/// isomorphic to a factor with a smaller id (it was found there already)
/// or to a refused factor (extensions of refused factors are excluded).
pub fn enumerate_order(fp: Fp, factors: &Catalog, coset_limit: u64) -> Result<Catalog> {
    run_level(fp, &as_loop_catalog(factors)?, coset_limit, None, "")
}

/// All levels from order `p` to `p^exponent`, in memory.
pub fn enumerate(fp: Fp, exponent: u32, kind: CatalogKind, coset_limit: u64) -> Result<Vec<Catalog>> {
    let mut levels: Vec<Catalog> = Vec::new();
    let mut current = trivial_catalog(kind, fp.p() as u32);
    for _ in 0..exponent {
        current = enumerate_order(fp, &current, coset_limit)?;
        levels.push(current.clone());
    }
    if kind == CatalogKind::Quandle {
        for c in levels.iter_mut() {
            *c = to_quandle_catalog(c)?;
        }
    }
    Ok(levels)
}

/// Converts a Bruck catalog into the catalog of its quandles; entries keep
/// their ids, provenance and fingerprints.
pub fn to_quandle_catalog(c: &Catalog) -> Result<Catalog> {
    match c.kind {
        CatalogKind::Quandle => return Ok(c.clone()),
        CatalogKind::CommutativeAutomorphic => return arg("only Bruck catalogs have quandles"),
        CatalogKind::Bruck => {}
    }
    let entries = c
        .entries
        .iter()
        .map(|e| {
            let b = e.as_loop()?;
            let q = bruck_to_quandle(&b)?;
            if quandle_to_bruck(&q, 0)? != b {
                return Err(Error::Internal(format!("entry {} does not round-trip", e.id)));
            }
            Ok(CatalogEntry {
                table: ParsedTable::Quandle(q),
                ..e.clone()
            })
        })
        .collect::<Result<_>>()?;
    Ok(Catalog {
        kind: CatalogKind::Quandle,
        entries,
        ..c.clone()
    })
}

/// A quandle catalog seen as the catalog of its Bruck loops.
fn as_loop_catalog(c: &Catalog) -> Result<Catalog> {
    if c.kind != CatalogKind::Quandle {
        return Ok(c.clone());
    }
    let entries = c
        .entries
        .iter()
        .map(|e| {
            Ok(CatalogEntry {
                table: ParsedTable::Loop(e.as_loop()?),
                ..e.clone()
            })
        })
        .collect::<Result<_>>()?;
    Ok(Catalog {
        kind: CatalogKind::Bruck,
        entries,
        ..c.clone()
    })
}

/// Parameters of a persisted enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub kind: CatalogKind,
    pub prime: u32,
    pub exponent: u32,
    /// Catalog to extend; `None` starts from order 1.
    pub factors: Option<PathBuf>,
    pub coset_limit: u64,
}

impl JobSpec {
    fn to_text(&self) -> String {
        let factors = match &self.factors {
            Some(p) => p.display().to_string(),
            None => "-".into(),
        };
        format!(
            "variety {}\nprime {}\nexponent {}\ncoset-limit {}\nfactors {}\n",
            self.kind, self.prime, self.exponent, self.coset_limit, factors
        )
    }

    fn from_text(text: &str) -> Result<Self> {
        let get = |key: &str| -> Result<String> {
            text.lines()
                .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
                .map(str::to_string)
                .ok_or_else(|| Error::Parse {
                    line: 1,
                    msg: format!("job file lacks {key}"),
                })
        };
        let num = |s: String| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad number {s:?}"),
            })
        };
        let factors = get("factors")?;
        Ok(Self {
            kind: CatalogKind::parse(&get("variety")?)?,
            prime: num(get("prime")?)? as u32,
            exponent: num(get("exponent")?)? as u32,
            coset_limit: num(get("coset-limit")?)?,
            factors: (factors != "-").then(|| PathBuf::from(factors)),
        })
    }
}

/// An enumeration writing its final catalog to `out` and its checkpoints
/// to `out/.job`. Running it again, or via [`EnumerationJob::resume`],
/// reuses every completed stage.
#[derive(Clone, Debug)]
pub struct EnumerationJob {
    out: PathBuf,
    spec: JobSpec,
    stop_after: Option<usize>,
}

impl EnumerationJob {
    pub const JOB_DIR: &'static str = ".job";

    pub fn new(out: impl Into<PathBuf>, spec: JobSpec) -> Self {
        Self {
            out: out.into(),
            spec,
            stop_after: None,
        }
    }

    /// Reopens the job recorded in `out`.
    pub fn resume(out: impl Into<PathBuf>) -> Result<Self> {
        let out = out.into();
        let text = fs::read_to_string(out.join(Self::JOB_DIR).join("job.txt"))?;
        Ok(Self::new(out, JobSpec::from_text(&text)?))
    }

    /// Stops with [`Error::Interrupted`] after `n` checkpoint writes.
    pub fn stop_after(mut self, n: usize) -> Self {
        self.stop_after = Some(n);
        self
    }

    pub fn spec(&self) -> &JobSpec {
        &self.spec
    }

    fn job_dir(&self) -> PathBuf {
        self.out.join(Self::JOB_DIR)
    }

    pub fn run(&self) -> Result<Catalog> {
        let fp = Fp::new(self.spec.prime)?;
        let job_dir = self.job_dir();
        fs::create_dir_all(&job_dir)?;
        let job_file = job_dir.join("job.txt");
        let spec_text = self.spec.to_text();
        match fs::read_to_string(&job_file) {
            Ok(existing) if existing != spec_text => {
                return arg(format!(
                    "{} holds a different job; resume it or choose another directory",
                    self.out.display()
                ))
            }
            Ok(_) => {}
            Err(_) => write_atomic(&job_file, &spec_text)?,
        }
        let mut store = Store {
            root: job_dir.clone(),
            writes: 0,
            stop_after: self.stop_after,
        };
        let p = self.spec.prime as usize;
        let (mut current, first_level) = match &self.spec.factors {
            None => (trivial_catalog(self.spec.kind, self.spec.prime), 1),
            Some(dir) => {
                let c = as_loop_catalog(&Catalog::load(dir)?)?;
                if c.kind.loop_variety() != self.spec.kind.loop_variety() || c.prime != self.spec.prime {
                    return arg("factor catalog has a different variety or prime");
                }
                (c.clone(), exponent_of(c.order, p)? + 1)
            }
        };
        if first_level > self.spec.exponent {
            return arg("target exponent must exceed the factor order's exponent");
        }
        for level in first_level..=self.spec.exponent {
            let dir = job_dir.join(format!("level-{level}")).join("catalog");
            current = if dir.join(super::catalog::MANIFEST).exists() {
                Catalog::load(&dir)?
            } else {
                let c = run_level(fp, &current, self.spec.coset_limit, Some(&mut store), &format!("level-{level}"))?;
                c.save(&dir)?;
                store.checkpoint()?;
                c
            };
        }
        if self.spec.kind == CatalogKind::Quandle {
            current = to_quandle_catalog(&current)?;
        }
        current.save(&self.out)?;
        Ok(current)
    }
}

fn exponent_of(order: usize, p: usize) -> Result<u32> {
    let mut k = 0;
    let mut m = order;
    while m > 1 && m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    if m != 1 {
        return arg(format!("order {order} is not a power of {p}"));
    }
    Ok(k)
}

/// Whether `dir` contains a saved catalog.
pub fn has_catalog(dir: &Path) -> bool {
    dir.join(super::catalog::MANIFEST).exists()
}
