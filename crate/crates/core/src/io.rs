//! CSV and JSON file formats.
//!
//! - sequences and samples: `n,re,im` with an optional sidecar
//!   `{"kappa", "alpha", "N"}` next to the CSV (`foo.csv` → `foo.json`);
//! - grid functions: `x,re,im` with a required sidecar `{"h", "T", "tail"}`;
//! - matrices: `j,k,re,im`;
//! - symbols: `{"kind": "trig", "terms": [[freq, re, im], …]}` or
//!   `{"kind": "grid", "h", "T", "tail", "values": "<csv>"}`, the CSV path
//!   taken relative to the JSON file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bandlimited::{Band, LatticeOffset, SampledBandlimited};
use crate::discrete_hardy::FiniteSequence;
use crate::error::{Error, Result};
use crate::hankel::{HankelMatrix, SymbolSpec};
use crate::projection::{GridFunction, TailModel, TrigPolynomial};
use crate::Complex64;

/// `foo.csv` → `foo.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceMeta {
    pub kappa: f64,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub h: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(default)]
    pub tail: TailModel,
}

fn reader(path: &Path, header: &[&str]) -> Result<csv::Reader<File>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::invalid(format!(
            "{}: expected header {}, found {}",
            path.display(),
            header.join(","),
            got.join(",")
        )));
    }
    Ok(rdr)
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<File>> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    Ok(w)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let f = File::open(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_reader(BufReader::new(f))?)
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

fn finite(re: f64, im: f64, path: &Path) -> Result<Complex64> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::invalid(format!("{}: non-finite value", path.display())))
    }
}

// ---------------------------------------------------------------- sequences

/// The rows of an `n,re,im` file, in file order.
pub fn read_indexed(path: &Path) -> Result<Vec<(i64, Complex64)>> {
    let mut rows = Vec::new();
    for rec in reader(path, &["n", "re", "im"])?.deserialize() {
        let (n, re, im): (i64, f64, f64) = rec?;
        rows.push((n, finite(re, im, path)?));
    }
    Ok(rows)
}

/// Reads `n,re,im`. Indices absent from the file are zero; the window is the
/// sidecar's `N` when present, else the largest `|n|`.
pub fn read_sequence(path: &Path) -> Result<(FiniteSequence, Option<SequenceMeta>)> {
    let side = sidecar_path(path);
    let meta: Option<SequenceMeta> = if side.exists() { Some(read_json(&side)?) } else { None };
    let rows = read_indexed(path)?;
    let widest = rows.iter().map(|r| r.0.unsigned_abs() as usize).max().unwrap_or(0);
    let window = match meta {
        Some(m) if m.n < widest => {
            return Err(Error::invalid(format!("{}: index {widest} outside N = {}", path.display(), m.n)))
        }
        Some(m) => m.n,
        None => widest,
    };
    let mut values = vec![Complex64::new(0.0, 0.0); 2 * window + 1];
    let mut seen = vec![false; values.len()];
    for (n, v) in rows {
        let i = (n + window as i64) as usize;
        if seen[i] {
            return Err(Error::invalid(format!("{}: index {n} repeated", path.display())));
        }
        seen[i] = true;
        values[i] = v;
    }
    Ok((FiniteSequence::new(values)?, meta))
}

pub fn write_sequence(path: &Path, a: &FiniteSequence) -> Result<()> {
    let mut w = writer(path, &["n", "re", "im"])?;
    for (n, v) in a.indexed() {
        w.serialize((n, v.re, v.im))?;
    }
    w.flush()?;
    Ok(())
}

/// Samples with band and offset from the sidecar; without one, `band` and
/// `offset` are used. Where both are given they must agree.
pub fn read_sampled(path: &Path, band: Option<Band>, offset: Option<LatticeOffset>) -> Result<SampledBandlimited> {
    let (seq, meta) = read_sequence(path)?;
    let agree = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
    let (band, offset) = match meta {
        Some(m) => {
            if band.is_some_and(|b| !agree(b.kappa(), m.kappa)) || offset.is_some_and(|o| !agree(o.alpha(), m.alpha)) {
                return Err(Error::invalid(format!("{}: kappa/alpha disagree with the sidecar", path.display())));
            }
            (Band::new(m.kappa)?, LatticeOffset::new(m.alpha)?)
        }
        None => (band.unwrap_or_else(Band::pi), offset.unwrap_or_else(LatticeOffset::zero)),
    };
    SampledBandlimited::new(band, offset, seq.values().to_vec())
}

pub fn write_sampled(path: &Path, s: &SampledBandlimited) -> Result<()> {
    let mut w = writer(path, &["n", "re", "im"])?;
    for (n, v) in s.indexed() {
        w.serialize((n, v.re, v.im))?;
    }
    w.flush()?;
    let meta = SequenceMeta {
        kappa: s.band().kappa(),
        alpha: s.offset().alpha(),
        n: s.window(),
    };
    write_json(&sidecar_path(path), &meta)
}

// ---------------------------------------------------------------- grids

fn read_grid_values(path: &Path, meta: &GridMeta) -> Result<GridFunction> {
    if !(meta.h > 0.0 && meta.t >= meta.h) {
        return Err(Error::invalid(format!("{}: bad grid h = {}, T = {}", path.display(), meta.h, meta.t)));
    }
    let k = (meta.t / meta.h + 1e-9).floor() as i64;
    let mut values = Vec::with_capacity(2 * k as usize + 1);
    for (i, rec) in reader(path, &["x", "re", "im"])?.deserialize().enumerate() {
        let (x, re, im): (f64, f64, f64) = rec?;
        let expected = (i as i64 - k) as f64 * meta.h;
        if (x - expected).abs() > 1e-9 * meta.h.max(expected.abs()) {
            return Err(Error::invalid(format!(
                "{}: row {} has x = {x}, expected {expected}",
                path.display(),
                i + 1
            )));
        }
        values.push(finite(re, im, path)?);
    }
    if values.len() != 2 * k as usize + 1 {
        return Err(Error::invalid(format!(
            "{}: {} rows, expected {} for h = {}, T = {}",
            path.display(),
            values.len(),
            2 * k + 1,
            meta.h,
            meta.t
        )));
    }
    GridFunction::new(meta.h, values, meta.tail.clone())
}

pub fn read_grid(path: &Path) -> Result<GridFunction> {
    let side = sidecar_path(path);
    if !side.exists() {
        return Err(Error::invalid(format!("{}: missing sidecar {}", path.display(), side.display())));
    }
    let meta: GridMeta = read_json(&side)?;
    read_grid_values(path, &meta)
}

fn grid_meta(g: &GridFunction) -> GridMeta {
    GridMeta {
        h: g.step(),
        t: g.extent(),
        tail: g.tail().clone(),
    }
}

fn write_grid_values(path: &Path, g: &GridFunction) -> Result<()> {
    let mut w = writer(path, &["x", "re", "im"])?;
    for (x, v) in g.nodes().zip(g.values()) {
        w.serialize((x, v.re, v.im))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid(path: &Path, g: &GridFunction) -> Result<()> {
    write_grid_values(path, g)?;
    write_json(&sidecar_path(path), &grid_meta(g))
}

// ---------------------------------------------------------------- matrices

/// Entries `M_{jk}`, `|j|, |k| <= N`, row-major.
pub fn write_matrix(path: &Path, m: &HankelMatrix) -> Result<()> {
    let mut w = writer(path, &["j", "k", "re", "im"])?;
    let n = m.n as i64;
    for j in -n..=n {
        for k in -n..=n {
            let v = m.get(j, k);
            w.serialize((j, k, v.re, v.im))?;
        }
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- symbols

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SymbolFile {
    Trig {
        terms: Vec<(f64, f64, f64)>,
    },
    Grid {
        h: f64,
        #[serde(rename = "T")]
        t: f64,
        #[serde(default)]
        tail: TailModel,
        values: PathBuf,
    },
}

pub fn read_symbol(path: &Path) -> Result<SymbolSpec> {
    match read_json::<SymbolFile>(path)? {
        SymbolFile::Trig { terms } => {
            let terms = terms.into_iter().map(|(f, re, im)| (f, Complex64::new(re, im))).collect();
            Ok(SymbolSpec::Trig(TrigPolynomial::new(terms)?))
        }
        SymbolFile::Grid { h, t, tail, values } => {
            let csv = path.parent().map(|d| d.join(&values)).unwrap_or(values);
            Ok(SymbolSpec::Grid(read_grid_values(&csv, &GridMeta { h, t, tail })?))
        }
    }
}

/// Trig symbols go into one JSON file; a grid symbol also writes its values
/// to `<stem>.values.csv` beside it.
pub fn write_symbol(path: &Path, s: &SymbolSpec) -> Result<()> {
    let file = match s {
        SymbolSpec::Trig(p) => SymbolFile::Trig {
            terms: p.terms().iter().map(|(f, c)| (*f, c.re, c.im)).collect(),
        },
        SymbolSpec::Grid(g) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("symbol");
            let name = PathBuf::from(format!("{stem}.values.csv"));
            let csv = path.parent().map(|d| d.join(&name)).unwrap_or_else(|| name.clone());
            write_grid_values(&csv, g)?;
            let m = grid_meta(g);
            SymbolFile::Grid {
                h: m.h,
                t: m.t,
                tail: m.tail,
                values: name,
            }
        }
    };
    write_json(path, &file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadratureSpec;

    #[test]
    fn sampled_round_trip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let s = SampledBandlimited::from_fn(Band::new(2.0).unwrap(), LatticeOffset::new(0.25).unwrap(), 3, |x| {
            Complex64::new(x, -x * x)
        })
        .unwrap();
        write_sampled(&p, &s).unwrap();
        assert_eq!(read_sampled(&p, None, None).unwrap(), s);
        assert!(read_sampled(&p, Some(Band::pi()), None).is_err());
    }

    #[test]
    fn sparse_sequence_without_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "n,re,im\n-2,1,0\n1, 0.5 ,-1\n").unwrap();
        let (a, meta) = read_sequence(&p).unwrap();
        assert!(meta.is_none());
        assert_eq!(a.window(), 2);
        assert_eq!(a.get(1), Complex64::new(0.5, -1.0));
        assert_eq!(a.get(0), Complex64::new(0.0, 0.0));
        std::fs::write(&p, "n,re,im\n0,1,0\n0,2,0\n").unwrap();
        assert!(read_sequence(&p).is_err());
        std::fs::write(&p, "k,re,im\n0,1,0\n").unwrap();
        assert!(matches!(read_sequence(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn grid_and_symbol_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = GridFunction::from_fn(0.25, 2.0, TailModel::BoundedBy { constant: 1.0 }, |x| Complex64::new(x.cos(), x)).unwrap();
        let p = dir.path().join("g.csv");
        write_grid(&p, &g).unwrap();
        assert_eq!(read_grid(&p).unwrap(), g);
        let sp = dir.path().join("phi.json");
        write_symbol(&sp, &SymbolSpec::Grid(g.clone())).unwrap();
        assert_eq!(read_symbol(&sp).unwrap(), SymbolSpec::Grid(g));
        let trig = SymbolSpec::Trig(TrigPolynomial::cos(1.0).add(&TrigPolynomial::constant(Complex64::new(0.0, 2.0))));
        write_symbol(&sp, &trig).unwrap();
        assert_eq!(read_symbol(&sp).unwrap(), trig);
    }

    #[test]
    fn hand_written_symbol_and_matrix_export() {
        let dir = tempfile::tempdir().unwrap();
        let sp = dir.path().join("one.json");
        std::fs::write(&sp, r#"{"kind": "trig", "terms": [[0.0, 1.0, 0.0]]}"#).unwrap();
        let s = read_symbol(&sp).unwrap();
        let m = crate::hankel::assemble(&s, Band::new(std::f64::consts::FRAC_PI_2).unwrap(), 2, &QuadratureSpec::default()).unwrap();
        let mp = dir.path().join("m.csv");
        write_matrix(&mp, &m).unwrap();
        let text = std::fs::read_to_string(&mp).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("j,k,re,im"));
        assert_eq!(lines.count(), 25);
    }
}
