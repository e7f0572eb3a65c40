//! Command implementations behind the `polykernel` binary.
//!
//! Every command writes its human-readable output to the supplied writer
//! and returns an [`Outcome`], which maps onto the process exit code:
//! 0 on success, 2 for an empty kernel / not star-shaped, 1 on error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use polykernel::mesh_io::{read_collection, read_off, write_off};
use polykernel::oracle::{brute_force_kernel, hausdorff};
pub use polykernel::{MeshDataset, MeshElement};
use polykernel::{compute_outward_normals, polyhedron_kernel, KernelOptions, KernelStatus, Polyhedron};

pub mod generate;

/// Vertex-set distance allowed between the kernel and the oracle.
pub const VERIFY_HAUSDORFF_TOL: f64 = 1e-7;
/// Relative volume difference allowed between the kernel and the oracle.
pub const VERIFY_VOLUME_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Empty kernel, not star-shaped.
    Empty,
    Failure,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 1,
            Outcome::Empty => 2,
        }
    }
}

/// One row of a batch report. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetRow {
    pub id: String,
    pub n_verts: usize,
    pub n_faces: usize,
    pub status: String,
    pub kernel_volume: f64,
    pub iterations: usize,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub error: Option<String>,
}

impl DatasetRow {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

/// Reads an OFF file and derives outward normals, repairing a globally
/// inward winding.
pub fn load_off(path: &Path) -> Result<(Polyhedron, Vec<polykernel::Point3>)> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut poly = read_off(BufReader::new(file)).with_context(|| format!("cannot parse {}", path.display()))?;
    let normals = compute_outward_normals(&mut poly).with_context(|| format!("invalid polyhedron in {}", path.display()))?;
    Ok((poly, normals))
}

pub fn load_collection(path: &Path) -> Result<MeshDataset> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_collection(BufReader::new(file)).with_context(|| format!("cannot parse {}", path.display()))
}

fn kernel_row(e: &MeshElement, opts: &KernelOptions) -> DatasetRow {
    let start = Instant::now();
    let result = polyhedron_kernel(&e.poly, &e.normals, opts);
    let wall_time_s = start.elapsed().as_secs_f64();
    let (status, kernel_volume, iterations, error) = match result {
        Ok(r) => (r.status.as_str().to_string(), r.volume, r.iterations, None),
        Err(e) => ("ERROR".to_string(), 0.0, 0, Some(e.to_string())),
    };
    DatasetRow {
        id: e.id.clone(),
        n_verts: e.poly.verts.len(),
        n_faces: e.poly.faces.len(),
        status,
        kernel_volume,
        iterations,
        wall_time_s,
        error,
    }
}

/// Kernel of every element, computed in parallel across elements. Rows come
/// back in input order. Timing covers the kernel computation only.
pub fn run_batch(dataset: &MeshDataset, opts: &KernelOptions) -> Vec<DatasetRow> {
    dataset.elements.par_iter().map(|e| kernel_row(e, opts)).collect()
}

pub fn write_report<W: Write>(rows: &[DatasetRow], w: W) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    csv.write_record(["id", "n_verts", "n_faces", "status", "kernel_volume", "iterations", "wall_time_s"])?;
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// `kernel`: computes the kernel of one OFF polyhedron and optionally writes
/// it as OFF.
pub fn cmd_kernel(input: &Path, output: Option<&Path>, opts: &KernelOptions, out: &mut dyn Write) -> Result<Outcome> {
    let (poly, normals) = load_off(input)?;
    let start = Instant::now();
    let r = polyhedron_kernel(&poly, &normals, opts)?;
    let elapsed = start.elapsed().as_secs_f64();
    writeln!(out, "status: {}", r.status)?;
    writeln!(out, "volume: {}", r.volume)?;
    writeln!(out, "iterations: {}", r.iterations)?;
    writeln!(out, "time_s: {elapsed:.6}")?;
    match (&r.kernel, output) {
        (Some(k), Some(path)) => {
            write_off(k, create(path)?)?;
            writeln!(out, "kernel written to {}", path.display())?;
        }
        (None, Some(_)) => writeln!(out, "kernel is empty, nothing written")?,
        _ => {}
    }
    Ok(if r.status == KernelStatus::Empty { Outcome::Empty } else { Outcome::Success })
}

/// `batch`: kernels of every element of a collection, as a CSV report.
/// With `omit_timing` the wall-time column is zeroed so reports are
/// byte-for-byte reproducible.
pub fn cmd_batch(
    collection: &Path,
    report: Option<&Path>,
    opts: &KernelOptions,
    omit_timing: bool,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let dataset = load_collection(collection)?;
    let mut rows = run_batch(&dataset, opts);
    if omit_timing {
        rows.iter_mut().for_each(|r| r.wall_time_s = 0.0);
    }
    match report {
        Some(path) => write_report(&rows, create(path)?)?,
        None => write_report(&rows, &mut *out)?,
    }
    let mut failed = false;
    for r in &rows {
        if let Some(err) = &r.error {
            eprintln!("element {}: {err}", r.id);
            failed = true;
        }
    }
    Ok(if failed { Outcome::Failure } else { Outcome::Success })
}

/// `check-star`: star-shapedness test, always in shuffle mode.
pub fn cmd_check_star(input: &Path, opts: &KernelOptions, out: &mut dyn Write) -> Result<Outcome> {
    let (poly, normals) = load_off(input)?;
    let opts = KernelOptions { shuffle: true, ..*opts };
    let r = polyhedron_kernel(&poly, &normals, &opts)?;
    if r.star_shaped {
        writeln!(out, "STAR-SHAPED (iterations: {}, kernel volume: {})", r.iterations, r.volume)?;
        Ok(Outcome::Success)
    } else {
        writeln!(out, "NOT STAR-SHAPED (iterations: {} of {} faces)", r.iterations, poly.faces.len())?;
        Ok(Outcome::Empty)
    }
}

/// Comparison of one element's kernel with the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub id: String,
    pub kernel_status: String,
    pub oracle_status: String,
    pub hausdorff: f64,
    pub volume_rel_diff: f64,
    pub ok: bool,
    pub note: String,
}

pub fn verify_element(e: &MeshElement, opts: &KernelOptions) -> VerifyRow {
    let mut row = VerifyRow {
        id: e.id.clone(),
        kernel_status: String::new(),
        oracle_status: String::new(),
        hausdorff: 0.0,
        volume_rel_diff: 0.0,
        ok: false,
        note: String::new(),
    };
    let kernel = match polyhedron_kernel(&e.poly, &e.normals, opts) {
        Ok(k) => k,
        Err(err) => {
            row.note = err.to_string();
            return row;
        }
    };
    row.kernel_status = kernel.status.as_str().into();
    let oracle = match brute_force_kernel(&e.poly, &e.normals) {
        Ok(o) => o,
        Err(err) => {
            row.note = err.to_string();
            return row;
        }
    };
    row.oracle_status = if oracle.is_some() { "NON_EMPTY" } else { "EMPTY" }.into();
    match (&kernel.kernel, &oracle) {
        (None, None) => row.ok = true,
        (Some(k), Some(o)) => {
            row.hausdorff = hausdorff(&k.verts, &o.vertices);
            row.volume_rel_diff = (kernel.volume - o.volume).abs() / o.volume;
            row.ok = row.hausdorff <= VERIFY_HAUSDORFF_TOL && row.volume_rel_diff <= VERIFY_VOLUME_TOL;
        }
        _ => row.note = "emptiness disagrees".into(),
    }
    row
}

/// `verify`: cross-checks every element against the brute-force oracle.
pub fn cmd_verify(collection: &Path, report: Option<&Path>, opts: &KernelOptions, out: &mut dyn Write) -> Result<Outcome> {
    let dataset = load_collection(collection)?;
    let rows: Vec<VerifyRow> = dataset.elements.par_iter().map(|e| verify_element(e, opts)).collect();
    match report {
        Some(path) => write_csv(&rows, create(path)?)?,
        None => write_csv(&rows, &mut *out)?,
    }
    let max_h = rows.iter().map(|r| r.hausdorff).fold(0.0, f64::max);
    let max_v = rows.iter().map(|r| r.volume_rel_diff).fold(0.0, f64::max);
    let failed = rows.iter().filter(|r| !r.ok).count();
    writeln!(
        out,
        "verified {} elements: max hausdorff {max_h:e}, max relative volume difference {max_v:e}, {failed} failed",
        rows.len()
    )?;
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Failure })
}

fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

/// Timing of the batch computation for one dataset size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n_elements: usize,
    pub repeats: usize,
    pub min_wall_time_s: f64,
    pub time_per_element_s: f64,
}

/// Dataset of `n` elements cloned cyclically from `source`.
pub fn cloned_dataset(source: &MeshDataset, n: usize) -> MeshDataset {
    let elements = source
        .elements
        .iter()
        .cycle()
        .take(if source.is_empty() { 0 } else { n })
        .enumerate()
        .map(|(i, e)| MeshElement {
            id: format!("{}#{i}", e.id),
            ..e.clone()
        })
        .collect();
    MeshDataset { elements }
}

/// Minimum over `repeats` runs of the batch wall time, for each size. An
/// empty source yields no rows.
pub fn bench_scaling(source: &MeshDataset, sizes: &[usize], repeats: usize, opts: &KernelOptions) -> Vec<BenchRow> {
    if source.is_empty() {
        return Vec::new();
    }
    let repeats = repeats.max(1);
    sizes
        .iter()
        .map(|&n| {
            let dataset = cloned_dataset(source, n);
            let min = (0..repeats)
                .map(|_| {
                    let start = Instant::now();
                    let rows = run_batch(&dataset, opts);
                    let t = start.elapsed().as_secs_f64();
                    std::hint::black_box(rows);
                    t
                })
                .fold(f64::INFINITY, f64::min);
            BenchRow {
                n_elements: n,
                repeats,
                min_wall_time_s: min,
                time_per_element_s: min / n.max(1) as f64,
            }
        })
        .collect()
}

/// `bench`: batch timings over cloned datasets of the given sizes.
pub fn cmd_bench(
    collection: &Path,
    sizes: &[usize],
    repeats: usize,
    report: Option<&Path>,
    opts: &KernelOptions,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let dataset = load_collection(collection)?;
    let rows = bench_scaling(&dataset, sizes, repeats, opts);
    match report {
        Some(path) => write_csv_with_header(&rows, create(path)?)?,
        None => write_csv_with_header(&rows, &mut *out)?,
    }
    Ok(Outcome::Success)
}

fn write_csv_with_header<W: Write>(rows: &[BenchRow], w: W) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    csv.write_record(["n_elements", "repeats", "min_wall_time_s", "time_per_element_s"])?;
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}
