//! Matrix Market exchange format.
//!
//! Reads `coordinate` matrices over `real`, `integer` or `complex` with
//! `general`, `symmetric`, `hermitian` or `skew-symmetric` storage, and
//! `array` (dense, column-major) vectors for right-hand sides. Symmetric
//! storage is expanded to general; duplicate coordinates are summed.
//! `pattern` files are rejected.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::csr::CsrMatrix;
use super::scalar::{Complex64, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy)]
struct Header {
    layout: Layout,
    field: Field,
    symmetry: Symmetry,
}

/// A matrix whose field is decided by the file.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixMarketMatrix {
    Real(CsrMatrix<f64>),
    Complex(CsrMatrix<Complex64>),
}

impl MatrixMarketMatrix {
    pub fn field(&self) -> Field {
        match self {
            MatrixMarketMatrix::Real(_) => Field::Real,
            MatrixMarketMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn nrows(&self) -> usize {
        match self {
            MatrixMarketMatrix::Real(a) => a.nrows(),
            MatrixMarketMatrix::Complex(a) => a.nrows(),
        }
    }

    /// The matrix over the complex field, promoting real files.
    pub fn into_complex(self) -> CsrMatrix<Complex64> {
        match self {
            MatrixMarketMatrix::Real(a) => a.to_complex(),
            MatrixMarketMatrix::Complex(a) => a,
        }
    }
}

/// A dense vector whose field is decided by the file.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixMarketVector {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl MatrixMarketVector {
    pub fn len(&self) -> usize {
        match self {
            MatrixMarketVector::Real(v) => v.len(),
            MatrixMarketVector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn into_complex(self) -> Vec<Complex64> {
        match self {
            MatrixMarketVector::Real(v) => v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            MatrixMarketVector::Complex(v) => v,
        }
    }
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    path: PathBuf,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::MatrixMarket {
            path: self.path.clone(),
            line: self.line_no,
            msg: msg.into(),
        }
    }

    fn raw(&mut self) -> Result<Option<String>> {
        match self.inner.next() {
            None => Ok(None),
            Some(Ok(l)) => {
                self.line_no += 1;
                Ok(Some(l))
            }
            Some(Err(source)) => Err(Error::Io {
                path: self.path.clone(),
                source,
            }),
        }
    }

    /// Next line that is neither blank nor a `%` comment.
    fn data(&mut self) -> Result<Option<String>> {
        while let Some(l) = self.raw()? {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Ok(Some(t.to_string()));
        }
        Ok(None)
    }
}

fn open(path: &Path) -> Result<Lines<BufReader<File>>> {
    let f = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Lines {
        inner: BufReader::new(f).lines(),
        path: path.to_path_buf(),
        line_no: 0,
    })
}

fn parse_header<R: BufRead>(lines: &mut Lines<R>) -> Result<Header> {
    let banner = lines.raw()?.ok_or_else(|| lines.err("empty file"))?;
    let toks: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if toks.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(lines.err("missing %%MatrixMarket banner"));
    }
    if toks.len() != 5 || toks[1] != "matrix" {
        return Err(lines.err(format!("malformed banner: {banner:?}")));
    }
    let layout = match toks[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(lines.err(format!("unsupported format {other:?}"))),
    };
    let field = match toks[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "complex" => Field::Complex,
        "pattern" => return Err(lines.err("pattern matrices are not supported")),
        other => return Err(lines.err(format!("unsupported field {other:?}"))),
    };
    let symmetry = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(lines.err(format!("unsupported symmetry {other:?}"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(lines.err("hermitian storage requires the complex field"));
    }
    Ok(Header {
        layout,
        field,
        symmetry,
    })
}

fn parse_usize<R: BufRead>(lines: &Lines<R>, tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| lines.err(format!("missing {what}")))?
        .parse()
        .map_err(|_| lines.err(format!("cannot parse {what}")))
}

fn parse_f64<R: BufRead>(lines: &Lines<R>, tok: Option<&str>, what: &str) -> Result<f64> {
    tok.ok_or_else(|| lines.err(format!("missing {what}")))?
        .parse()
        .map_err(|_| lines.err(format!("cannot parse {what}")))
}

fn parse_value<S: Scalar, R: BufRead>(
    lines: &Lines<R>,
    toks: &mut std::str::SplitWhitespace<'_>,
    field: Field,
) -> Result<S> {
    let re = parse_f64(lines, toks.next(), "value")?;
    let im = match field {
        Field::Real => 0.0,
        Field::Complex => parse_f64(lines, toks.next(), "imaginary part")?,
    };
    S::from_parts(re, im).ok_or_else(|| lines.err("complex value in a real-field read"))
}

fn read_coordinate<S: Scalar, R: BufRead>(lines: &mut Lines<R>, h: Header) -> Result<CsrMatrix<S>> {
    let size = lines.data()?.ok_or_else(|| lines.err("missing size line"))?;
    let mut toks = size.split_whitespace();
    let nrows = parse_usize(lines, toks.next(), "row count")?;
    let ncols = parse_usize(lines, toks.next(), "column count")?;
    let nnz = parse_usize(lines, toks.next(), "entry count")?;
    if h.symmetry != Symmetry::General && nrows != ncols {
        return Err(lines.err("symmetric storage requires a square matrix"));
    }

    let mut trip: Vec<(usize, usize, S)> = Vec::with_capacity(2 * nnz);
    for _ in 0..nnz {
        let l = lines.data()?.ok_or_else(|| lines.err("fewer entries than declared"))?;
        let mut toks = l.split_whitespace();
        let i = parse_usize(lines, toks.next(), "row index")?;
        let j = parse_usize(lines, toks.next(), "column index")?;
        if i == 0 || j == 0 || i > nrows || j > ncols {
            return Err(lines.err(format!("index ({i}, {j}) outside {nrows}x{ncols}")));
        }
        let v: S = parse_value(lines, &mut toks, h.field)?;
        let (i, j) = (i - 1, j - 1);
        trip.push((i, j, v));
        if i != j {
            match h.symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => trip.push((j, i, v)),
                Symmetry::Hermitian => trip.push((j, i, v.conj())),
                Symmetry::SkewSymmetric => trip.push((j, i, -v)),
            }
        } else if h.symmetry == Symmetry::SkewSymmetric {
            return Err(lines.err("skew-symmetric storage cannot hold a diagonal entry"));
        }
    }
    if lines.data()?.is_some() {
        return Err(lines.err("more entries than declared"));
    }
    CsrMatrix::from_triplets(nrows, ncols, &trip)
}

/// Reads a coordinate matrix; the field follows the file.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixMarketMatrix> {
    let mut lines = open(path.as_ref())?;
    let h = parse_header(&mut lines)?;
    if h.layout != Layout::Coordinate {
        return Err(lines.err("expected a coordinate matrix"));
    }
    Ok(match h.field {
        Field::Real => MatrixMarketMatrix::Real(read_coordinate(&mut lines, h)?),
        Field::Complex => MatrixMarketMatrix::Complex(read_coordinate(&mut lines, h)?),
    })
}

/// Reads a coordinate matrix into a fixed scalar type. A complex file read
/// as `f64` is an error; a real file read as complex is promoted.
pub fn read_matrix_market_as<S: Scalar>(path: impl AsRef<Path>) -> Result<CsrMatrix<S>> {
    let mut lines = open(path.as_ref())?;
    let h = parse_header(&mut lines)?;
    if h.layout != Layout::Coordinate {
        return Err(lines.err("expected a coordinate matrix"));
    }
    if h.field == Field::Complex && !S::IS_COMPLEX {
        return Err(lines.err("complex file read into a real matrix"));
    }
    read_coordinate(&mut lines, h)
}

fn read_array<S: Scalar, R: BufRead>(lines: &mut Lines<R>, h: Header) -> Result<Vec<S>> {
    if h.symmetry != Symmetry::General {
        return Err(lines.err("only general array vectors are supported"));
    }
    let size = lines.data()?.ok_or_else(|| lines.err("missing size line"))?;
    let mut toks = size.split_whitespace();
    let nrows = parse_usize(lines, toks.next(), "row count")?;
    let ncols = parse_usize(lines, toks.next(), "column count")?;
    if ncols != 1 {
        return Err(lines.err(format!("expected a single column, found {ncols}")));
    }
    let mut out = Vec::with_capacity(nrows);
    while out.len() < nrows {
        let l = lines.data()?.ok_or_else(|| lines.err("fewer values than declared"))?;
        let mut toks = l.split_whitespace();
        out.push(parse_value(lines, &mut toks, h.field)?);
    }
    if lines.data()?.is_some() {
        return Err(lines.err("more values than declared"));
    }
    Ok(out)
}

/// Reads a right-hand side. Accepts `array` files and `coordinate` files
/// with a single column.
pub fn read_matrix_market_vector(path: impl AsRef<Path>) -> Result<MatrixMarketVector> {
    let mut lines = open(path.as_ref())?;
    let h = parse_header(&mut lines)?;
    match (h.layout, h.field) {
        (Layout::Array, Field::Real) => Ok(MatrixMarketVector::Real(read_array(&mut lines, h)?)),
        (Layout::Array, Field::Complex) => Ok(MatrixMarketVector::Complex(read_array(&mut lines, h)?)),
        (Layout::Coordinate, field) => {
            fn column<S: Scalar>(a: CsrMatrix<S>) -> Option<Vec<S>> {
                (a.ncols() == 1).then(|| {
                    let mut v = vec![S::zero(); a.nrows()];
                    for (i, _, x) in a.triplets() {
                        v[i] = x;
                    }
                    v
                })
            }
            const MSG: &str = "coordinate right-hand side must have one column";
            match field {
                Field::Real => {
                    let v = column(read_coordinate::<f64, _>(&mut lines, h)?);
                    v.map(MatrixMarketVector::Real).ok_or_else(|| lines.err(MSG))
                }
                Field::Complex => {
                    let v = column(read_coordinate::<Complex64, _>(&mut lines, h)?);
                    v.map(MatrixMarketVector::Complex).ok_or_else(|| lines.err(MSG))
                }
            }
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn field_name<S: Scalar>() -> &'static str {
    if S::IS_COMPLEX {
        "complex"
    } else {
        "real"
    }
}

fn write_value<S: Scalar>(w: &mut impl Write, v: S) -> std::io::Result<()> {
    if S::IS_COMPLEX {
        write!(w, "{:.16e} {:.16e}", v.re(), v.im())
    } else {
        write!(w, "{:.16e}", v.re())
    }
}

/// Writes `a` as a general coordinate matrix with 1-based indices and
/// 17 significant digits.
pub fn write_matrix_market<S: Scalar>(path: impl AsRef<Path>, a: &CsrMatrix<S>) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate {} general", field_name::<S>())?;
        writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
        for (i, j, v) in a.triplets() {
            write!(w, "{} {} ", i + 1, j + 1)?;
            write_value(&mut w, v)?;
            writeln!(w)?;
        }
        w.flush()
    })()
    .map_err(io)
}

/// Writes a dense vector in `array` format.
pub fn write_matrix_market_vector<S: Scalar>(path: impl AsRef<Path>, v: &[S]) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix array {} general", field_name::<S>())?;
        writeln!(w, "{} 1", v.len())?;
        for &x in v {
            write_value(&mut w, x)?;
            writeln!(w)?;
        }
        w.flush()
    })()
    .map_err(io)
}
