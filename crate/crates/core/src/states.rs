//! State families and the density-matrix text format.
//!
//! Qubit states use the coefficient convention `ρ = ½I + aσ1 + bσ2 + cσ3`,
//! so pure states sit at Bloch radius ½.

use std::path::Path;

use serde_json::Value;

use crate::qmat::{kron, pauli, validate_density, CMatrix, DensityMatrix};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BlochVector {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_pure(&self) -> bool {
        (self.norm_sqr() - 0.25).abs() <= 1e-10
    }

    /// Coefficients of a qubit state: `a = tr(ρσ1)/2` and so on.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.dim(),
            });
        }
        let coeff = |i| (rho.matrix() * &pauli(i)).trace().re / 2.0;
        Ok(Self::new(coeff(1), coeff(2), coeff(3)))
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

/// Parameters of `ρ = ¼(I + Σ c_i σ_i⊗σ_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let p = Self { c1, c2, c3 };
        let min = p.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-12 || !(c1.is_finite() && c2.is_finite() && c3.is_finite()) {
            return Err(Error::InvalidBellDiagonal { eigenvalue: min });
        }
        Ok(p)
    }

    /// `max(|c1|, |c2|, |c3|)`.
    pub fn c(&self) -> f64 {
        self.c1.abs().max(self.c2.abs()).max(self.c3.abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Eigenvalues of the state, in the order
    /// `(1−c1−c2−c3)/4, (1−c1+c2+c3)/4, (1+c1−c2+c3)/4, (1+c1+c2−c3)/4`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            (1.0 - c1 - c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(z: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::WernerOutOfRange(z));
        }
        Ok(Self(z))
    }

    pub fn z(self) -> f64 {
        self.0
    }
}

pub fn from_bloch(v: BlochVector) -> Result<DensityMatrix> {
    if v.norm_sqr() > 0.25 + 1e-12 {
        return Err(Error::BlochOutOfRange { length: v.norm() });
    }
    let m = &(&(&pauli(0).scale_real(0.5) + &pauli(1).scale_real(v.a)) + &pauli(2).scale_real(v.b))
        + &pauli(3).scale_real(v.c);
    validate_density(m)
}

pub fn bell() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
    DensityMatrix::from_trusted(CMatrix::outer(&psi, &psi))
}

/// `(1−z) I/4 + z |Φ+⟩⟨Φ+|`.
pub fn werner(z: WernerParam) -> DensityMatrix {
    let z = z.z();
    let mixed = CMatrix::identity(4).scale_real((1.0 - z) / 4.0);
    DensityMatrix::from_trusted(&mixed + &bell().matrix().scale_real(z))
}

pub fn bell_diagonal(p: BellDiagonalParams) -> DensityMatrix {
    let mut m = CMatrix::identity(4);
    for (i, ci) in [(1, p.c1), (2, p.c2), (3, p.c3)] {
        m = &m + &kron(&pauli(i), &pauli(i)).scale_real(ci);
    }
    DensityMatrix::from_trusted(m.scale_real(0.25))
}

/// `tr(ρ σ_i⊗σ_i)` for i = 1, 2, 3. Equals `(c1, c2, c3)` on Bell-diagonal states.
pub fn correlation_coefficients(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let t = |i| (rho.matrix() * &kron(&pauli(i), &pauli(i))).trace().re;
    Ok([t(1), t(2), t(3)])
}

/// `¼[[2,0,0,0],[0,0,0,0],[0,0,1,1],[0,0,1,1]]`: classical on A, quantum on B.
pub fn asymmetric_example() -> DensityMatrix {
    let m = CMatrix::from_real_rows(&[
        vec![2.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 1.0],
        vec![0.0, 0.0, 1.0, 1.0],
    ]);
    DensityMatrix::from_trusted(m.scale_real(0.25))
}

/// The pure state `(√3|0⟩ + |1⟩)/2`, i.e. `[[3/4, √3/4], [√3/4, 1/4]]`.
pub fn decoherence_start() -> DensityMatrix {
    let s = 3f64.sqrt() / 4.0;
    DensityMatrix::from_trusted(CMatrix::from_real_rows(&[vec![0.75, s], vec![s, 0.25]]))
}

/// `[[3/4, √3/2], [√3/2, 1/4]]`: the decoherence start with the uncorrected
/// off-diagonal. Not positive semidefinite; kept so the CLI can show the rejection.
pub fn decoherence_start_uncorrected() -> CMatrix {
    let s = 3f64.sqrt() / 2.0;
    CMatrix::from_real_rows(&[vec![0.75, s], vec![s, 0.25]])
}

fn parse_floats(args: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{what}: {e} in `{args}`")))?;
    if vals.len() != count {
        return Err(Error::Parse(format!(
            "{what}: expected {count} comma-separated numbers, found {}",
            vals.len()
        )));
    }
    Ok(vals)
}

/// Resolves a state keyword (`bell`, `werner:z`, `bell-diagonal:c1,c2,c3`,
/// `bloch:a,b,c`, `c10-example`, `maximally-mixed:D`) or a path to a state file.
pub fn resolve_state(spec: &str) -> Result<DensityMatrix> {
    let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "bell" if args.is_empty() => Ok(bell()),
        "c10-example" if args.is_empty() => Ok(asymmetric_example()),
        "werner" => {
            let z = parse_floats(args, 1, "werner")?[0];
            Ok(werner(WernerParam::new(z)?))
        }
        "bell-diagonal" => {
            let v = parse_floats(args, 3, "bell-diagonal")?;
            Ok(bell_diagonal(BellDiagonalParams::new(v[0], v[1], v[2])?))
        }
        "bloch" => {
            let v = parse_floats(args, 3, "bloch")?;
            from_bloch(BlochVector::new(v[0], v[1], v[2]))
        }
        "maximally-mixed" => {
            let d: usize = args
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("maximally-mixed: {e} in `{args}`")))?;
            if d == 0 {
                return Err(Error::Parse("maximally-mixed: dimension must be positive".into()));
            }
            Ok(DensityMatrix::maximally_mixed(d))
        }
        _ => read_state(Path::new(spec)),
    }
}

/// Parses the `{"dim": D, "re": [[..]], "im": [[..]]}` matrix format.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object with fields dim, re, im".into()))?;
    let dim = obj
        .get("dim")
        .ok_or_else(|| Error::Parse("missing field `dim`".into()))?;
    let dim = dim
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::Parse(format!("field `dim`: expected a positive integer, found {dim}")))?
        as usize;
    let re = parse_rows(obj.get("re"), "re", dim)?;
    let im = parse_rows(obj.get("im"), "im", dim)?;
    let data = re.into_iter().zip(im).map(|(r, i)| C64::new(r, i)).collect();
    CMatrix::new(dim, dim, data)
}

fn parse_rows(value: Option<&Value>, field: &str, dim: usize) -> Result<Vec<f64>> {
    let rows = value
        .ok_or_else(|| Error::Parse(format!("missing field `{field}`")))?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("field `{field}`: expected an array of rows")))?;
    if rows.len() != dim {
        return Err(Error::Parse(format!(
            "field `{field}`: expected {dim} rows, found {}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| Error::Parse(format!("field `{field}` row {i}: expected {dim} numbers")))?;
        for (j, x) in row.iter().enumerate() {
            out.push(x.as_f64().ok_or_else(|| {
                Error::Parse(format!("field `{field}` entry ({i}, {j}): expected a number, found {x}"))
            })?);
        }
    }
    Ok(out)
}

/// Writes a square matrix with 17 significant digits per entry.
pub fn serialize_matrix(m: &CMatrix) -> String {
    assert!(m.is_square(), "matrix file format holds square matrices");
    let n = m.rows();
    let part = |f: &dyn Fn(C64) -> f64| {
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let cells: Vec<String> = (0..n).map(|j| format!("{:.16e}", f(m[(i, j)]))).collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        rows.join(",\n")
    };
    format!(
        "{{\n  \"dim\": {n},\n  \"re\": [\n{}\n  ],\n  \"im\": [\n{}\n  ]\n}}\n",
        part(&|z| z.re),
        part(&|z| z.im)
    )
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    validate_density(parse_matrix(text)?)
}

pub fn serialize_state(rho: &DensityMatrix) -> String {
    serialize_matrix(rho.matrix())
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read `{}`: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    validate_density(read_matrix(path)?)
}
