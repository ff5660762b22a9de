use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use dexact::algebra::BoundAlgebra;
use dexact::approx::AddSubcategory;
use dexact::dexact::{Ambient, FamilyOptions};
use dexact::par::Exec;
use dexact::repmod::{build_catalog, format_dims, Catalog, CatalogOptions, IsoOptions};

use crate::alg::{self, AlgFile, AmbientSpec, ParseError, Selector};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("cannot read {path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dexact::Error),
    #[error("{} inconclusive instance(s): {}", .0.len(), .0.join(", "))]
    Inconclusive(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use dexact::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Inconclusive(_) => 5,
            CliError::Core(e) if e.is_inconclusive() => 5,
            CliError::Core(E::InfiniteDimensional { .. } | E::CatalogCapExceeded(_)) => 3,
            CliError::Core(E::ResolutionTooLong { .. } | E::NotGenerating(_)) => 4,
            CliError::Core(
                E::Config(_) | E::InvalidQuiver(_) | E::InvalidRelation(_) | E::NotPrime(_) | E::FieldMismatch,
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub struct Session {
    pub file: AlgFile,
    pub catalog: Arc<Catalog>,
    pub exec: Exec,
    pub seed: Option<u64>,
}

impl Session {
    pub fn load(path: &Path, seed: Option<u64>, exec: Exec) -> Result<Session, CliError> {
        let src = std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.to_path_buf(), err })?;
        let file = alg::parse(&src).map_err(|err| CliError::Parse { path: path.to_path_buf(), err })?;
        let alg: Arc<BoundAlgebra> = file.build()?;
        let opts = CatalogOptions {
            dim_cap: file.settings.dim_cap,
            iso: iso_options(&file, seed),
            ..CatalogOptions::default()
        };
        let catalog = Arc::new(build_catalog(&alg, &opts)?);
        let s = Session { file, catalog, exec, seed };
        // every named subcategory must resolve against the catalog
        for sub in &s.file.subcats {
            s.subcat(&sub.name)?;
        }
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.file.settings.d
    }

    /// `proj`, `inj`, `all`, or a `[subcat NAME]` from the file.
    pub fn subcat(&self, name: &str) -> Result<AddSubcategory, CliError> {
        let c = &self.catalog;
        match name {
            "proj" => return Ok(AddSubcategory::projectives(c)?),
            "inj" => return Ok(AddSubcategory::injectives(c)?),
            "all" => return Ok(AddSubcategory::everything(c)),
            _ => {}
        }
        let spec = self
            .file
            .subcat(name)
            .ok_or_else(|| CliError::Usage(format!("no subcategory named `{name}`")))?;
        let mut members = Vec::new();
        for (sel, line) in &spec.selectors {
            match sel {
                Selector::Projectives => members.extend(c.projectives()?),
                Selector::Injectives => members.extend(c.injectives()?),
                Selector::All => members.extend(0..c.len()),
                Selector::Dims(d) => members.push(self.lookup_dims(d).map_err(|msg| CliError::Usage(format!("line {line}: {msg}")))?),
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(AddSubcategory::new(c, members, name)?)
    }

    fn lookup_dims(&self, d: &[usize]) -> Result<usize, String> {
        let n = self.catalog.algebra().n_vertices();
        if d.len() != n {
            return Err(format!("dimension vector {} needs {n} entries", format_dims(d)));
        }
        match self.catalog.find_by_dims(d).as_slice() {
            [k] => Ok(*k),
            [] => Err(format!("no indecomposable with dimension vector {}", format_dims(d))),
            ks => Err(format!("{} indecomposables share dimension vector {}", ks.len(), format_dims(d))),
        }
    }

    /// A catalog object by dimension vector or by label.
    pub fn object(&self, spec: &str) -> Result<usize, CliError> {
        if let Some(k) = self.catalog.find(spec) {
            return Ok(k);
        }
        let d = alg::parse_dimvec_arg(spec).map_err(|_| CliError::Usage(format!("`{spec}` is neither a dimension vector nor a label")))?;
        self.lookup_dims(&d).map_err(CliError::Usage)
    }

    /// Picks `--subcat`, then the file's default key, then `proj`.
    pub fn choose(&self, flag: Option<&str>, default: &Option<String>) -> Result<AddSubcategory, CliError> {
        self.subcat(flag.or(default.as_deref()).unwrap_or("proj"))
    }

    pub fn ambient(&self) -> Result<Ambient, CliError> {
        let d = self.d();
        Ok(match &self.file.settings.ambient {
            AmbientSpec::Module => Ambient::module_category(&self.catalog),
            AmbientSpec::ClusterTilting(t) => Ambient::d_cluster_tilting(&self.subcat(t)?, d),
            AmbientSpec::Torsion { u, t } => Ambient::d_torsion_class(&self.subcat(u)?, &self.subcat(t)?, d),
        })
    }

    pub fn family_options(&self) -> FamilyOptions {
        let s = &self.file.settings;
        let base = FamilyOptions::default();
        FamilyOptions {
            max_multiplicity: s.max_multiplicity,
            max_types: s.max_types,
            random_combos: s.random_combos,
            seed: self.seed.unwrap_or(base.seed),
            exec: self.exec,
            ..base
        }
    }

    pub fn iso_options(&self) -> IsoOptions {
        iso_options(&self.file, self.seed)
    }
}

fn iso_options(file: &AlgFile, seed: Option<u64>) -> IsoOptions {
    let base = IsoOptions::default();
    IsoOptions {
        coeff_bound: file.settings.coeff_bound,
        seed: seed.unwrap_or(base.seed),
        ..base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        use dexact::Error as E;
        let code = |e: E| CliError::Core(e).exit_code();
        assert_eq!(code(E::InfiniteDimensional { bound: 64, paths: 65 }), 3);
        assert_eq!(code(E::ResolutionTooLong { steps: 2, syzygy: vec![0, 0, 1] }), 4);
        assert_eq!(code(E::InconclusiveIso), 5);
        assert_eq!(code(E::SearchExhausted("x".into())), 5);
        assert_eq!(code(E::NotAdmissible), 1);
        assert_eq!(CliError::Inconclusive(vec!["pair".into()]).exit_code(), 5);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
