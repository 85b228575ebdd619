//! Run settings from flags, an optional `key = value` file, and defaults,
//! in that order of precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::Args;
use splicestat_core::svm::{GammaSetting, KernelKind, KernelSpec};
use splicestat_core::{FeatureConfig, FeatureSchema, PreprocessConfig};

use crate::error::{CliError, CliResult};

pub const CONFIG_KEYS: &[&str] = &[
    "block_size",
    "dwt_levels",
    "resize",
    "median_radius",
    "gaussian_sigma",
    "kernel",
    "C",
    "gamma",
    "degree",
    "coef0",
    "k",
    "seed",
    "tol",
    "max_passes",
];

/// Parsed config file. Blank lines and lines starting with `#` are ignored.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(CliError::usage(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            if values.insert(key.to_owned(), value.trim().to_owned()).is_some() {
                return Err(CliError::usage(format!("config line {}: duplicate key `{key}`", n + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::usage(format!("config key `{key}` = `{v}`: {e}"))))
            .transpose()
    }

    /// Flag value if given, else the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// `WxH`, e.g. `128x128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size(pub usize, pub usize);

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
        let w: usize = w.trim().parse().map_err(|_| format!("bad width in `{s}`"))?;
        let h: usize = h.trim().parse().map_err(|_| format!("bad height in `{s}`"))?;
        if w == 0 || h == 0 {
            return Err(format!("size `{s}` must be non-zero"));
        }
        Ok(Size(w, h))
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct PipelineArgs {
    /// DCT block size B.
    #[arg(long)]
    pub block_size: Option<usize>,
    /// Haar decomposition levels.
    #[arg(long)]
    pub dwt_levels: Option<usize>,
    /// Resize every image to WxH first.
    #[arg(long, value_name = "WxH")]
    pub resize: Option<Size>,
    #[arg(long)]
    pub median_radius: Option<usize>,
    #[arg(long)]
    pub gaussian_sigma: Option<f64>,
}

impl PipelineArgs {
    pub fn preprocess(&self, cfg: &ConfigFile) -> CliResult<PreprocessConfig> {
        let pre = PreprocessConfig {
            resize_to: cfg.pick(self.resize, "resize")?.map(|Size(w, h)| (w, h)),
            median_radius: cfg.pick(self.median_radius, "median_radius")?,
            gaussian_sigma: cfg.pick(self.gaussian_sigma, "gaussian_sigma")?,
        };
        pre.validate()?;
        Ok(pre)
    }

    pub fn feature_config(&self, cfg: &ConfigFile) -> CliResult<FeatureConfig> {
        let d = FeatureSchema::default();
        let fc = FeatureConfig::new(
            self.preprocess(cfg)?,
            cfg.pick(self.block_size, "block_size")?.unwrap_or(d.block_size),
            cfg.pick(self.dwt_levels, "dwt_levels")?.unwrap_or(d.dwt_levels),
        );
        fc.schema().validate()?;
        Ok(fc)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct SvmArgs {
    /// linear, polynomial, rbf or sigmoid.
    #[arg(long)]
    pub kernel: Option<KernelKind>,
    /// Box constraint.
    #[arg(long = "C", value_name = "C")]
    pub c: Option<f64>,
    /// Kernel γ, or `auto` for 1/n_features.
    #[arg(long)]
    pub gamma: Option<GammaSetting>,
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub coef0: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// KKT tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_passes: Option<usize>,
}

/// SVM settings after merging; `None` means "not specified anywhere".
#[derive(Debug, Clone)]
pub struct SvmSettings {
    pub kernel: Option<KernelKind>,
    pub c: Option<f64>,
    pub gamma: Option<GammaSetting>,
    pub degree: Option<u32>,
    pub coef0: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    pub max_passes: usize,
}

impl SvmArgs {
    pub fn resolve(&self, cfg: &ConfigFile) -> CliResult<SvmSettings> {
        let s = SvmSettings {
            kernel: cfg.pick(self.kernel, "kernel")?,
            c: cfg.pick(self.c, "C")?,
            gamma: cfg.pick(self.gamma, "gamma")?,
            degree: cfg.pick(self.degree, "degree")?,
            coef0: cfg.pick(self.coef0, "coef0")?,
            seed: cfg.pick(self.seed, "seed")?.unwrap_or(0),
            tol: cfg.pick(self.tol, "tol")?.unwrap_or(1e-3),
            max_passes: cfg.pick(self.max_passes, "max_passes")?.unwrap_or(10_000),
        };
        if let Some(c) = s.c {
            if !c.is_finite() || c <= 0.0 {
                return Err(CliError::usage(format!("C = {c} must be positive")));
            }
        }
        if !s.tol.is_finite() || s.tol <= 0.0 {
            return Err(CliError::usage(format!("tol = {} must be positive", s.tol)));
        }
        Ok(s)
    }
}

impl SvmSettings {
    /// Concrete kernel for `dim` features. Defaults: RBF, γ = auto,
    /// degree 3, coef0 0. Parameters the kernel does not take are rejected.
    pub fn kernel_spec(&self, dim: usize) -> CliResult<KernelSpec> {
        let kind = self.kernel.unwrap_or(KernelKind::Rbf);
        let takes_gamma = kind != KernelKind::Linear;
        let takes_degree = kind == KernelKind::Polynomial;
        let takes_coef0 = matches!(kind, KernelKind::Polynomial | KernelKind::Sigmoid);
        for (given, takes, name) in [
            (self.gamma.is_some(), takes_gamma, "gamma"),
            (self.degree.is_some(), takes_degree, "degree"),
            (self.coef0.is_some(), takes_coef0, "coef0"),
        ] {
            if given && !takes {
                return Err(CliError::usage(format!("{kind} kernel does not take {name}")));
            }
        }
        let gamma = takes_gamma.then(|| self.gamma.unwrap_or(GammaSetting::Auto).resolve(dim));
        let degree = takes_degree.then(|| self.degree.unwrap_or(3));
        let coef0 = takes_coef0.then(|| self.coef0.unwrap_or(0.0));
        Ok(KernelSpec::from_parts(kind, gamma, degree, coef0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values_and_comments() {
        let cfg = ConfigFile::parse("# run\nblock_size = 16\n\nkernel=linear\nC = 2.5\n").unwrap();
        assert_eq!(cfg.pick::<usize>(None, "block_size").unwrap(), Some(16));
        assert_eq!(cfg.pick::<usize>(Some(8), "block_size").unwrap(), Some(8));
        assert_eq!(cfg.pick::<f64>(None, "C").unwrap(), Some(2.5));
        assert_eq!(cfg.pick::<usize>(None, "k").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(ConfigFile::parse("blocksize = 8").is_err());
        assert!(ConfigFile::parse("k = 5\nk = 6").is_err());
        assert!(ConfigFile::parse("k 5").is_err());
        let cfg = ConfigFile::parse("k = five").unwrap();
        assert!(cfg.pick::<usize>(None, "k").is_err());
    }

    #[test]
    fn size_parsing() {
        assert_eq!("128x96".parse::<Size>().unwrap(), Size(128, 96));
        assert!("128".parse::<Size>().is_err());
        assert!("0x5".parse::<Size>().is_err());
    }

    #[test]
    fn kernel_defaults_and_mismatches() {
        let base = SvmArgs::default().resolve(&ConfigFile::default()).unwrap();
        assert_eq!(base.kernel_spec(40).unwrap(), KernelSpec::Rbf { gamma: 0.025 });
        let linear_with_gamma = SvmSettings { kernel: Some(KernelKind::Linear), gamma: Some(GammaSetting::Auto), ..base.clone() };
        assert!(linear_with_gamma.kernel_spec(40).is_err());
        let poly = SvmSettings { kernel: Some(KernelKind::Polynomial), ..base };
        assert_eq!(poly.kernel_spec(4).unwrap(), KernelSpec::Polynomial { gamma: 0.25, degree: 3, coef0: 0.0 });
    }
}
