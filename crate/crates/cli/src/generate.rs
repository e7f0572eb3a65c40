//! Test-model generation for the `generate` command.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polykernel::mesh_io::{write_collection, write_off};
use polykernel::models::{self, Model};
use polykernel::{MeshDataset, MeshElement};

pub const MODEL_NAMES: &[&str] = &["cube", "tetrahedron", "l-prism", "tent", "ring", "star", "convex"];

/// Builds a named model. `param` is the tent entrance, ring path segments,
/// star inner radius or convex point count; `refine` applies that many
/// midpoint refinements.
pub fn named_model(name: &str, param: Option<f64>, seed: u64, refine: usize) -> Result<Model> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = match name {
        "cube" => models::unit_cube(),
        "tetrahedron" => models::unit_tetrahedron(),
        "l-prism" => models::l_prism(),
        "tent" => {
            let e = param.unwrap_or(0.5);
            if !(e > 0.0 && e < models::tent_max_entrance()) {
                bail!("tent entrance must lie in (0, {})", models::tent_max_entrance());
            }
            models::tent(e)
        }
        "ring" => {
            let segs = param.unwrap_or(200.0) as usize;
            if segs < 3 {
                bail!("ring needs at least 3 path segments");
            }
            models::ring(segs, 13)
        }
        "star" => models::star_bipyramid(param.unwrap_or(0.6)),
        "convex" => models::random_convex(&mut rng, (param.unwrap_or(30.0) as usize).max(4)),
        _ => bail!("unknown model {name:?}; expected one of {}", MODEL_NAMES.join(", ")),
    };
    for _ in 0..refine {
        model = models::midpoint_refine(&model);
    }
    Ok(model)
}

pub fn write_model(model: &Model, path: &Path) -> Result<()> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_off(&model.0, BufWriter::new(f))?;
    Ok(())
}

/// Collection of `count` random small polyhedra cycling through all random
/// families; some have empty kernels.
pub fn random_dataset(count: usize, seed: u64) -> MeshDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = (0..count)
        .map(|i| {
            let (poly, normals) = models::random_small(&mut rng, i);
            MeshElement { id: format!("r{i}"), poly, normals }
        })
        .collect();
    MeshDataset { elements }
}

pub fn write_dataset(dataset: &MeshDataset, path: &Path) -> Result<()> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_collection(dataset, BufWriter::new(f))?;
    Ok(())
}
