//! Algebra files and object names.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use seqcomp::algebra::{path_algebra, proj_indecs, simples, truncated_poly, Algebra, Module};
use seqcomp::catalog;
use seqcomp::complexes::Complex;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: Option<String>,
    pub p: u32,
    pub structure: Option<Structure>,
    pub quiver: Option<Quiver>,
    pub truncated: Option<Truncated>,
}

/// `products[i][j]` holds the coordinates of `b_i * b_j`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Structure {
    pub basis: Vec<String>,
    pub unit: Vec<i64>,
    pub products: Vec<Vec<Vec<i64>>>,
}

/// Acyclic quiver with vertices `1..=vertices`, no relations.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

/// `F_p[x]/(x^n)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncated {
    pub n: usize,
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile, CliError> {
    toml::from_str(text).map_err(|e| CliError::Input(format!("algebra file: {e}")))
}

impl AlgebraFile {
    pub fn build(&self) -> Result<Arc<Algebra>, CliError> {
        let given = [self.structure.is_some(), self.quiver.is_some(), self.truncated.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Input("exactly one of [structure], [quiver], [truncated] is required".into()));
        }
        let r = if let Some(s) = &self.structure {
            Algebra::new(self.p, s.basis.clone(), s.products.clone(), s.unit.clone())
        } else if let Some(q) = &self.quiver {
            path_algebra(self.p, q.vertices, &q.arrows)
        } else {
            truncated_poly(self.p, self.truncated.as_ref().unwrap().n)
        };
        r.map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A catalog name, or a path to an algebra file.
pub fn resolve_algebra(spec: &str) -> Result<(String, Arc<Algebra>), CliError> {
    if catalog::NAMES.iter().any(|(n, _)| *n == spec) {
        let a = catalog::lookup(spec).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok((spec.to_string(), a));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Input(format!("unknown algebra '{spec}': not in the catalog and no such file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    let file = parse_algebra_file(&text)?;
    let name = file.name.clone().unwrap_or_else(|| spec.to_string());
    Ok((name, file.build()?))
}

/// `k` (first simple), `S<i>`, `P<i>`, `L` (regular module).
pub fn resolve_module(alg: &Arc<Algebra>, name: &str) -> Result<Module, CliError> {
    let bad = || CliError::Input(format!("unknown module '{name}': use k, S<i>, P<i> or L"));
    let lib = |e: seqcomp::algebra::AlgError| CliError::Compute(e.to_string());
    let pick = |list: Vec<Module>, idx: &str| -> Result<Module, CliError> {
        let i: usize = idx.parse().map_err(|_| bad())?;
        list.into_iter().nth(i).ok_or_else(|| CliError::Input(format!("module index {i} out of range")))
    };
    match name {
        "k" => pick(simples(alg).map_err(lib)?, "0"),
        "L" => Ok(Module::regular(alg)),
        _ if name.starts_with('S') => pick(simples(alg).map_err(lib)?, &name[1..]),
        _ if name.starts_with('P') => pick(proj_indecs(alg).map_err(lib)?, &name[1..]),
        _ => Err(bad()),
    }
}

pub fn stalk(alg: &Arc<Algebra>, name: &str) -> Result<Complex, CliError> {
    Ok(Complex::stalk(&resolve_module(alg, name)?, 0))
}

/// `a:b` inclusive, or a single integer.
pub fn parse_window(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("window '{s}' must look like -4:4"));
    match s.split_once(':') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            Ok((a, a))
        }
    }
}

pub fn parse_list(s: &str) -> Result<Vec<u32>, CliError> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("bad exponent list '{s}'")))).collect()
}
