use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;

use super::{GroupError, MatrixGroup};
use crate::catalog::{self, CartanType, Sl2Kind};
use crate::exactlin::{Mat, SympSpace};

/// Parsed group spec string, e.g. `cyclic:5`, `weyl:B3`, `matrix-file:g.json`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    BinaryDihedral(u32),
    Weyl(CartanType),
    Symmetric(usize),
    /// S_n on ℂⁿ ⊕ ℂⁿ by coordinate permutation.
    Permutation(usize),
    /// Trivial group on ℂ^{2k}.
    Trivial(usize),
    MatrixFile(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::BinaryDihedral(n) => write!(f, "binary-dihedral:{n}"),
            GroupSpec::Weyl(t) => write!(f, "weyl:{t}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Permutation(n) => write!(f, "permutation:{n}"),
            GroupSpec::Trivial(k) => write!(f, "trivial:{k}"),
            GroupSpec::MatrixFile(p) => write!(f, "matrix-file:{}", p.display()),
        }
    }
}

pub fn parse_group_spec(s: &str) -> Result<GroupSpec, GroupError> {
    let (kind, arg) = s
        .trim()
        .split_once(':')
        .ok_or_else(|| GroupError::Spec(format!("expected KIND:ARG, got {s:?}")))?;
    let num = |a: &str| -> Result<u32, GroupError> {
        a.parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| GroupError::Spec(format!("expected a positive integer, got {a:?}")))
    };
    Ok(match kind {
        "cyclic" => GroupSpec::Cyclic(num(arg)?),
        "binary-dihedral" => {
            let n = num(arg)?;
            if n < 2 {
                return Err(GroupError::Spec("binary-dihedral:n needs n >= 2".into()));
            }
            GroupSpec::BinaryDihedral(n)
        }
        "weyl" => GroupSpec::Weyl(CartanType::parse(arg)?),
        "symmetric" => GroupSpec::Symmetric(num(arg)? as usize),
        "permutation" => GroupSpec::Permutation(num(arg)? as usize),
        "trivial" => GroupSpec::Trivial(num(arg)? as usize),
        "matrix-file" => GroupSpec::MatrixFile(PathBuf::from(arg)),
        _ => return Err(GroupError::Spec(format!("unknown group kind {kind:?}"))),
    })
}

#[derive(Deserialize)]
struct MatrixFile {
    #[serde(rename = "J")]
    form: Mat,
    gens: Vec<Mat>,
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<MatrixGroup, GroupError> {
        match self {
            GroupSpec::Cyclic(n) => catalog::sl2_subgroup(Sl2Kind::Cyclic, *n, cap),
            GroupSpec::BinaryDihedral(n) => catalog::sl2_subgroup(Sl2Kind::BinaryDihedral, *n, cap),
            GroupSpec::Weyl(t) => catalog::weyl_group(*t, cap),
            GroupSpec::Symmetric(n) => catalog::symmetric_group(*n, cap),
            GroupSpec::Permutation(n) => catalog::permutation_group(*n, cap),
            GroupSpec::Trivial(k) => catalog::trivial_group(*k),
            GroupSpec::MatrixFile(path) => {
                let io = |e: String| GroupError::Io {
                    path: path.display().to_string(),
                    message: e,
                };
                let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
                let file: MatrixFile =
                    serde_json::from_str(&text).map_err(|e| io(e.to_string()))?;
                let space =
                    SympSpace::new(file.form).map_err(|e| GroupError::Spec(e.to_string()))?;
                MatrixGroup::generate(&file.gens, space, cap)
            }
        }
    }
}

/// Parses and builds in one step.
pub fn build_group(spec: &str, cap: usize) -> Result<MatrixGroup, GroupError> {
    parse_group_spec(spec)?.build(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in [
            "cyclic:5",
            "binary-dihedral:3",
            "weyl:E6",
            "symmetric:3",
            "permutation:2",
            "trivial:2",
        ] {
            assert_eq!(parse_group_spec(s).unwrap().to_string(), s);
        }
        assert!(parse_group_spec("cyclic:0").is_err());
        assert!(parse_group_spec("weyl:Q3").is_err());
        assert!(parse_group_spec("nonsense").is_err());
    }

    #[test]
    fn matrix_file_input() {
        let dir = std::env::temp_dir().join(format!("mckaykit-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z2.json");
        let one = r#"{"N":1,"coeffs":["1"]}"#;
        let zero = r#"{"N":1,"coeffs":[]}"#;
        let neg = r#"{"N":1,"coeffs":["-1"]}"#;
        let json = format!(
            r#"{{"J": [[{zero},{one}],[{neg},{zero}]], "gens": [[[{neg},{zero}],[{zero},{neg}]]]}}"#
        );
        std::fs::write(&path, json).unwrap();
        let g = build_group(&format!("matrix-file:{}", path.display()), 100).unwrap();
        assert_eq!(g.order(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }
}
