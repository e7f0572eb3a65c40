//! OFF reading/writing, the line-based element collection format, and
//! outward normal computation.
//!
//! Collection files are a sequence of blocks:
//!
//! ```text
//! element <id>
//! verts <nv>
//! x y z            (nv lines)
//! faces <nf>
//! k i1 ... ik      (nf lines)
//! normals <nf>     (optional)
//! nx ny nz         (nf lines)
//! ```
//!
//! Both formats accept `#` comments and blank lines anywhere.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::error::Error;
use crate::geometry::{face_normal_newell, Face, Point3, Polyhedron};

#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: vertex index {index} out of range ({len} vertices)")]
    IndexOutOfRange { line: usize, index: usize, len: usize },
    #[error("element '{id}': {source}")]
    Element {
        id: String,
        #[source]
        source: Box<MeshIoError>,
    },
    #[error(transparent)]
    Geometry(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl MeshIoError {
    fn parse(line: usize, msg: impl Into<String>) -> Self {
        MeshIoError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type IoResult<T> = std::result::Result<T, MeshIoError>;

/// One polyhedral element of a dataset together with its outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshElement {
    pub id: String,
    pub poly: Polyhedron,
    pub normals: Vec<Point3>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeshDataset {
    pub elements: Vec<MeshElement>,
}

impl MeshDataset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Non-blank, comment-stripped lines with 1-based line numbers.
struct Tokens<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Tokens<R> {
    fn new(r: R) -> Self {
        Tokens {
            inner: r.lines(),
            line: 0,
        }
    }

    fn next_line(&mut self) -> IoResult<Option<(usize, Vec<String>)>> {
        for raw in self.inner.by_ref() {
            let raw = raw?;
            self.line += 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<String> = content.split_whitespace().map(str::to_owned).collect();
            if !toks.is_empty() {
                return Ok(Some((self.line, toks)));
            }
        }
        Ok(None)
    }

    fn expect_line(&mut self, what: &str) -> IoResult<(usize, Vec<String>)> {
        self.next_line()?
            .ok_or_else(|| MeshIoError::parse(self.line + 1, format!("unexpected end of input, expected {what}")))
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> IoResult<T> {
    tok.parse()
        .map_err(|_| MeshIoError::parse(line, format!("invalid {what} '{tok}'")))
}

fn parse_point(toks: &[String], line: usize) -> IoResult<Point3> {
    if toks.len() < 3 {
        return Err(MeshIoError::parse(line, "expected 3 coordinates"));
    }
    let p = Point3::new(
        parse_num(&toks[0], line, "coordinate")?,
        parse_num(&toks[1], line, "coordinate")?,
        parse_num(&toks[2], line, "coordinate")?,
    );
    if !p.is_finite() {
        return Err(MeshIoError::parse(line, "non-finite coordinate"));
    }
    Ok(p)
}

fn parse_face(toks: &[String], line: usize, n_verts: usize) -> IoResult<Face> {
    let k: usize = parse_num(&toks[0], line, "face size")?;
    if toks.len() < k + 1 {
        return Err(MeshIoError::parse(
            line,
            format!("face declares {k} vertices but lists {}", toks.len() - 1),
        ));
    }
    let mut ids = Vec::with_capacity(k);
    for t in &toks[1..=k] {
        let index: usize = parse_num(t, line, "vertex index")?;
        if index >= n_verts {
            return Err(MeshIoError::IndexOutOfRange {
                line,
                index,
                len: n_verts,
            });
        }
        ids.push(index);
    }
    Face::new(ids).map_err(|e| MeshIoError::parse(line, e.to_string()))
}

/// Reads an ASCII OFF polyhedron. Face winding is kept as stored.
pub fn read_off<R: BufRead>(reader: R) -> IoResult<Polyhedron> {
    let mut tokens = Tokens::new(reader);
    let (line, header) = tokens.expect_line("OFF header")?;
    if header[0] != "OFF" {
        return Err(MeshIoError::parse(line, format!("expected 'OFF', found '{}'", header[0])));
    }
    // Counts may share the header line.
    let (line, counts) = if header.len() > 1 {
        (line, header[1..].to_vec())
    } else {
        tokens.expect_line("counts line")?
    };
    if counts.len() < 2 {
        return Err(MeshIoError::parse(line, "expected 'nv nf ne'"));
    }
    let nv: usize = parse_num(&counts[0], line, "vertex count")?;
    let nf: usize = parse_num(&counts[1], line, "face count")?;

    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, toks) = tokens.expect_line("vertex line")?;
        verts.push(parse_point(&toks, line)?);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, toks) = tokens.expect_line("face line")?;
        faces.push(parse_face(&toks, line, nv)?);
    }
    Ok(Polyhedron { verts, faces })
}

/// Writes `poly` as ASCII OFF with 17 significant digits per coordinate,
/// which round-trips every `f64` exactly.
pub fn write_off<W: Write>(poly: &Polyhedron, mut w: W) -> io::Result<()> {
    writeln!(w, "OFF")?;
    writeln!(w, "{} {} 0", poly.verts.len(), poly.faces.len())?;
    for p in &poly.verts {
        writeln!(w, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z)?;
    }
    write_faces(poly, &mut w)?;
    w.flush()
}

fn write_faces<W: Write>(poly: &Polyhedron, w: &mut W) -> io::Result<()> {
    for f in &poly.faces {
        write!(w, "{}", f.len())?;
        for i in f.indices() {
            write!(w, " {i}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Newell normals of every face of a closed polyhedron. If the faces are
/// wound inward as a whole, every face is reversed first so that the signed
/// volume becomes positive.
pub fn compute_outward_normals(poly: &mut Polyhedron) -> Result<Vec<Point3>, Error> {
    poly.check_closed()?;
    if poly.fan_volume() < 0.0 {
        *poly = poly.reversed();
    }
    poly.faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            face_normal_newell(&poly.face_points(f)).map_err(|_| Error::DegenerateFace { face: i })
        })
        .collect()
}

/// Reads a collection file. Elements without a `normals` block get their
/// normals (and, if needed, their winding) from [`compute_outward_normals`].
pub fn read_collection<R: BufRead>(reader: R) -> IoResult<MeshDataset> {
    let mut tokens = Tokens::new(reader);
    let mut dataset = MeshDataset::default();
    let mut seen = HashSet::new();
    let mut pending = tokens.next_line()?;
    while let Some((line, toks)) = pending.take() {
        if toks[0] != "element" || toks.len() < 2 {
            return Err(MeshIoError::parse(line, "expected 'element <id>'"));
        }
        let id = toks[1..].join(" ");
        if !seen.insert(id.clone()) {
            return Err(MeshIoError::parse(line, format!("duplicate element id '{id}'")));
        }
        let wrap = |e: MeshIoError| MeshIoError::Element {
            id: id.clone(),
            source: Box::new(e),
        };
        let (element, next) = read_element(&mut tokens, id.clone()).map_err(wrap)?;
        dataset.elements.push(element);
        pending = next;
    }
    Ok(dataset)
}

type NextLine = Option<(usize, Vec<String>)>;

fn read_element<R: BufRead>(tokens: &mut Tokens<R>, id: String) -> IoResult<(MeshElement, NextLine)> {
    let nv = read_section_header(tokens, "verts")?;
    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, toks) = tokens.expect_line("vertex line")?;
        verts.push(parse_point(&toks, line)?);
    }
    let nf = read_section_header(tokens, "faces")?;
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, toks) = tokens.expect_line("face line")?;
        faces.push(parse_face(&toks, line, nv)?);
    }
    let mut poly = Polyhedron { verts, faces };

    let next = tokens.next_line()?;
    let (normals, next) = match next {
        Some((line, toks)) if toks[0] == "normals" => {
            let count = section_count(&toks, line, "normals")?;
            if count != nf {
                return Err(MeshIoError::parse(
                    line,
                    format!("{count} normals for {nf} faces"),
                ));
            }
            let mut normals = Vec::with_capacity(nf);
            for _ in 0..nf {
                let (line, toks) = tokens.expect_line("normal line")?;
                let n = parse_point(&toks, line)?;
                let len = n.norm();
                if !(len > 0.0) {
                    return Err(MeshIoError::parse(line, "zero-length normal"));
                }
                normals.push(n / len);
            }
            (normals, tokens.next_line()?)
        }
        other => (compute_outward_normals(&mut poly)?, other),
    };
    Ok((MeshElement { id, poly, normals }, next))
}

fn section_count(toks: &[String], line: usize, keyword: &str) -> IoResult<usize> {
    if toks.len() != 2 {
        return Err(MeshIoError::parse(line, format!("expected '{keyword} <count>'")));
    }
    parse_num(&toks[1], line, "count")
}

fn read_section_header<R: BufRead>(tokens: &mut Tokens<R>, keyword: &str) -> IoResult<usize> {
    let (line, toks) = tokens.expect_line(keyword)?;
    if toks[0] != keyword {
        return Err(MeshIoError::parse(
            line,
            format!("expected '{keyword}', found '{}'", toks[0]),
        ));
    }
    section_count(&toks, line, keyword)
}

/// Writes a dataset in the collection format, normals included.
pub fn write_collection<W: Write>(dataset: &MeshDataset, mut w: W) -> io::Result<()> {
    for e in &dataset.elements {
        writeln!(w, "element {}", e.id)?;
        writeln!(w, "verts {}", e.poly.verts.len())?;
        for p in &e.poly.verts {
            writeln!(w, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z)?;
        }
        writeln!(w, "faces {}", e.poly.faces.len())?;
        write_faces(&e.poly, &mut w)?;
        writeln!(w, "normals {}", e.normals.len())?;
        for n in &e.normals {
            writeln!(w, "{:.16e} {:.16e} {:.16e}", n.x, n.y, n.z)?;
        }
    }
    w.flush()
}
