use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::conformal::{faber_matrix, ConformalMap};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Nystrom,
    Analytic,
    MeasuredFile,
}

/// Truncated contracted GPTs `N⁽¹⁾, N⁽²⁾` of order `ord` (1-based indices in the math,
/// 0-based in the matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct GptSet {
    ord: usize,
    n1: CMatrix,
    n2: CMatrix,
    provenance: Provenance,
}

impl GptSet {
    pub fn new(n1: CMatrix, n2: CMatrix, provenance: Provenance) -> Result<Self> {
        let ord = n1.nrows();
        if ord < 1 || !n1.is_square() || n2.shape() != n1.shape() {
            return Err(Error::InvalidInput(format!(
                "GPT matrices must be square of equal order (got {:?} and {:?})",
                n1.shape(),
                n2.shape()
            )));
        }
        if n1.iter().chain(n2.iter()).any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite GPT entry".into()));
        }
        Ok(Self { ord, n1, n2, provenance })
    }

    pub fn ord(&self) -> usize {
        self.ord
    }

    pub fn n1(&self) -> &CMatrix {
        &self.n1
    }

    pub fn n2(&self) -> &CMatrix {
        &self.n2
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// GPTs of a lower order are the leading blocks.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k < 1 || k > self.ord {
            return Err(Error::InvalidInput(format!(
                "cannot take order {k} from GPTs of order {}",
                self.ord
            )));
        }
        Ok(Self {
            ord: k,
            n1: linalg::leading(&self.n1, k),
            n2: linalg::leading(&self.n2, k),
            provenance: self.provenance,
        })
    }

    /// `max|N1 − N1ᵀ| / max(|N1|, |N2|)`; `N1` vanishes for disks, so it is measured against `N2`.
    pub fn n1_symmetry_residual(&self) -> f64 {
        let scale = linalg::max_abs(&self.n1).max(linalg::max_abs(&self.n2));
        if scale == 0.0 {
            return 0.0;
        }
        linalg::max_abs(&(&self.n1 - self.n1.transpose())) / scale
    }

    /// `max|N2 − N2ᴴ| / max|N2|`.
    pub fn n2_hermitian_residual(&self) -> f64 {
        linalg::hermitian_residual(&self.n2)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GptRepr::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: GptRepr =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("GPT JSON: {e}")))?;
        repr.try_into()
    }

    /// One row per entry: `m, n, re, im, matrix` with `matrix ∈ {N1, N2}` and 1-based indices.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["m", "n", "re", "im", "matrix"])?;
        for (tag, mat) in [("N1", &self.n1), ("N2", &self.n2)] {
            for i in 0..self.ord {
                for j in 0..self.ord {
                    let z = mat[(i, j)];
                    w.write_record([
                        (i + 1).to_string(),
                        (j + 1).to_string(),
                        z.re.to_string(),
                        z.im.to_string(),
                        tag.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(|e| Error::Parse(format!("GPT CSV header: {e}")))?;
        if header.iter().collect::<Vec<_>>() != ["m", "n", "re", "im", "matrix"] {
            return Err(Error::Parse(format!(
                "GPT CSV header must be `m,n,re,im,matrix`, got `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries: HashMap<(bool, usize, usize), C64> = HashMap::new();
        let mut ord = 0;
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("GPT CSV row {}: {e}", line + 2)))?;
            let bad = |what: &str| Error::Parse(format!("GPT CSV row {}: bad {what}", line + 2));
            let m: usize = rec[0].trim().parse().map_err(|_| bad("m"))?;
            let n: usize = rec[1].trim().parse().map_err(|_| bad("n"))?;
            let re: f64 = rec[2].trim().parse().map_err(|_| bad("re"))?;
            let im: f64 = rec[3].trim().parse().map_err(|_| bad("im"))?;
            let first = match rec[4].trim() {
                "N1" => true,
                "N2" => false,
                _ => return Err(bad("matrix tag")),
            };
            if m < 1 || n < 1 {
                return Err(bad("index"));
            }
            ord = ord.max(m).max(n);
            if entries.insert((first, m, n), C64::new(re, im)).is_some() {
                return Err(bad("duplicate entry"));
            }
        }
        if ord == 0 || entries.len() != 2 * ord * ord {
            return Err(Error::Parse(format!(
                "GPT CSV has {} entries; order {ord} needs {}",
                entries.len(),
                2 * ord * ord
            )));
        }
        let get = |first: bool| CMatrix::from_fn(ord, ord, |i, j| entries[&(first, i + 1, j + 1)]);
        Self::new(get(true), get(false), Provenance::MeasuredFile)
    }
}

/// Wire format: `{ord, N1: [[re, im], …], N2: …}` row-major.
#[derive(Serialize, Deserialize)]
struct GptRepr {
    ord: usize,
    #[serde(rename = "N1")]
    n1: Vec<[f64; 2]>,
    #[serde(rename = "N2")]
    n2: Vec<[f64; 2]>,
    #[serde(default = "measured")]
    provenance: Provenance,
}

fn measured() -> Provenance {
    Provenance::MeasuredFile
}

impl From<&GptSet> for GptRepr {
    fn from(g: &GptSet) -> Self {
        let flat = |m: &CMatrix| {
            (0..g.ord)
                .flat_map(|i| (0..g.ord).map(move |j| (i, j)))
                .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        };
        Self { ord: g.ord, n1: flat(&g.n1), n2: flat(&g.n2), provenance: g.provenance }
    }
}

impl TryFrom<GptRepr> for GptSet {
    type Error = Error;

    fn try_from(r: GptRepr) -> Result<Self> {
        let k = r.ord;
        if k < 1 || r.n1.len() != k * k || r.n2.len() != k * k {
            return Err(Error::Parse(format!(
                "GPT JSON of order {k} needs {} entries per matrix (got {} and {})",
                k * k,
                r.n1.len(),
                r.n2.len()
            )));
        }
        let build = |v: &[[f64; 2]]| CMatrix::from_fn(k, k, |i, j| C64::new(v[i * k + j][0], v[i * k + j][1]));
        Self::new(build(&r.n1), build(&r.n2), r.provenance)
    }
}

/// Faber polynomial polarization tensors `F⁽¹⁾, F⁽²⁾`.
#[derive(Debug, Clone, PartialEq)]
pub struct FptSet {
    ord: usize,
    f1: CMatrix,
    f2: CMatrix,
}

impl FptSet {
    pub fn new(f1: CMatrix, f2: CMatrix) -> Result<Self> {
        let ord = f1.nrows();
        if ord < 1 || !f1.is_square() || f2.shape() != f1.shape() {
            return Err(Error::InvalidInput("FPT matrices must be square of equal order".into()));
        }
        Ok(Self { ord, f1, f2 })
    }

    /// Basis change `F⁽¹⁾ = P N⁽¹⁾ Pᵀ`, `F⁽²⁾ = P̄ N⁽²⁾ Pᵀ` with the Faber matrix of `map`.
    pub fn from_gpts(gpts: &GptSet, map: &ConformalMap) -> Result<Self> {
        let p = faber_matrix(map, gpts.ord())?.matrix();
        let pt = p.transpose();
        Self::new(&p * gpts.n1() * &pt, p.map(|z| z.conj()) * gpts.n2() * &pt)
    }

    /// The GPTs themselves viewed as tensors of the monomial basis (`P = I`),
    /// for comparing domains under one common set of harmonic polynomials.
    pub fn monomial(gpts: &GptSet) -> Self {
        Self { ord: gpts.ord(), f1: gpts.n1().clone(), f2: gpts.n2().clone() }
    }

    pub fn ord(&self) -> usize {
        self.ord
    }

    pub fn f1(&self) -> &CMatrix {
        &self.f1
    }

    pub fn f2(&self) -> &CMatrix {
        &self.f2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GptSet {
        let n1 = CMatrix::from_fn(3, 3, |i, j| C64::new((i + j) as f64 * 0.5, (i * j) as f64 - 1.25));
        let n2 = CMatrix::from_fn(3, 3, |i, j| C64::new(1.0 + (i + j) as f64, i as f64 - j as f64));
        GptSet::new(n1, n2, Provenance::Nystrom).unwrap()
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let g = sample();
        let back = GptSet::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        let v: serde_json::Value = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        assert_eq!(v["ord"], 3);
        assert_eq!(v["N1"][5], serde_json::json!([1.5, 0.75]));
    }

    #[test]
    fn json_rejects_wrong_sizes() {
        assert!(matches!(
            GptSet::from_json(r#"{"ord":2,"N1":[[0,0]],"N2":[[0,0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(GptSet::from_json("{\"ord\": 2,"), Err(Error::Parse(_))));
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let g = sample();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = GptSet::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.n1(), g.n1());
        assert_eq!(back.n2(), g.n2());
        assert_eq!(back.provenance(), Provenance::MeasuredFile);
    }

    #[test]
    fn csv_rejects_bad_header_and_missing_rows() {
        assert!(GptSet::read_csv("a,b,c\n1,2,3\n".as_bytes()).is_err());
        assert!(GptSet::read_csv("m,n,re,im,matrix\n1,1,0,0,N1\n".as_bytes()).is_err());
    }

    #[test]
    fn leading_block() {
        let g = sample().leading(2).unwrap();
        assert_eq!(g.ord(), 2);
        assert_eq!(g.n1()[(1, 1)], sample().n1()[(1, 1)]);
        assert!(sample().leading(4).is_err());
    }
}
