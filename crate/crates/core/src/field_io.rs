//! Field snapshot files.
//!
//! CSV layout (text, one value per line, row-major node order):
//!
//! ```text
//! # rdlab-field v1
//! # extent = 1.0000000000000000e0
//! # points = 256
//! value
//! 5.0000000000000000e-1
//! ...
//! ```
//!
//! Extents and values are written with 17 significant digits, which is enough
//! to reproduce every `f64` bit-exactly. Multi-axis grids list comma-separated
//! extents and point counts.
//!
//! Binary layout (little endian): magic `RDLF`, `u32` version, `u32` dim,
//! `dim` x `f64` extents, `dim` x `u64` points, then the values as `f64`.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

const CSV_TAG: &str = "# rdlab-field v1";
const MAGIC: &[u8; 4] = b"RDLF";
const VERSION: u32 = 1;

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_csv<W: Write>(field: &Field, mut w: W) -> Result<()> {
    let g = field.grid();
    let extent: Vec<String> = g.extent().iter().map(|l| format!("{l:.16e}")).collect();
    writeln!(w, "{CSV_TAG}")?;
    writeln!(w, "# extent = {}", extent.join(","))?;
    writeln!(w, "# points = {}", join(g.points()))?;
    writeln!(w, "value")?;
    for v in field.values() {
        writeln!(w, "{v:.16e}")?;
    }
    Ok(())
}

fn header_value<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix("# ")
        .and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.trim_start().strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("expected '# {key} = ...', found '{line}'")))
}

pub fn read_csv<R: BufRead>(r: R) -> Result<Field> {
    let mut lines = r.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of field file".into()))?
            .map_err(Error::from)
    };
    if next()?.trim() != CSV_TAG {
        return Err(Error::Parse("missing field file tag".into()));
    }
    let extent_line = next()?;
    let extent = header_value(&extent_line, "extent")?
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let points_line = next()?;
    let points = header_value(&points_line, "points")?
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if next()?.trim() != "value" {
        return Err(Error::Parse("missing 'value' column header".into()));
    }
    let grid = Grid::new(extent, points)?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        values.push(line.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?);
    }
    Field::new(grid, values)
}

pub fn write_binary<W: Write>(field: &Field, mut w: W) -> Result<()> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(g.dim() as u32).to_le_bytes())?;
    for l in g.extent() {
        w.write_all(&l.to_le_bytes())?;
    }
    for &n in g.points() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<Field> {
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    if &b4 != MAGIC {
        return Err(Error::Parse("bad field file magic".into()));
    }
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != VERSION {
        return Err(Error::Parse("unsupported field file version".into()));
    }
    r.read_exact(&mut b4)?;
    let dim = u32::from_le_bytes(b4) as usize;
    if dim == 0 || dim > crate::grid::MAX_DIM {
        return Err(Error::Parse(format!("bad dimension {dim}")));
    }
    let mut extent = Vec::with_capacity(dim);
    for _ in 0..dim {
        r.read_exact(&mut b8)?;
        extent.push(f64::from_le_bytes(b8));
    }
    let mut points = Vec::with_capacity(dim);
    for _ in 0..dim {
        r.read_exact(&mut b8)?;
        points.push(u64::from_le_bytes(b8) as usize);
    }
    let grid = Grid::new(extent, points)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    Field::new(grid, values)
}
