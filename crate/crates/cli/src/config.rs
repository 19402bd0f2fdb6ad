//! Experiment configuration: parsing, defaults and validation.
//!
//! Every error message starts with the path of the offending field, e.g.
//! `generators[0][1].word: letter 3 out of range for d = 2`.

use std::path::{Path, PathBuf};

use ncball::deform::{FamilyTermRecord, Grid, IdealFamily, DEFAULT_PLUCKER_CAP, RANK_TOL};
use ncball::fock::GradedIdealBasis;
use ncball::ncfunc::{MatrixTuple, MatrixTupleRecord, VarietyKind, INEQ_SLACK};
use ncball::suite::SuiteOptions;
use ncball::{FreePoly, TermRecord, Word};
use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(path: impl AsRef<str>, msg: impl std::fmt::Display) -> Result<T, ConfigError> {
    Err(ConfigError(format!("{}: {msg}", path.as_ref())))
}

/// One generator term. Either a constant `re`/`im` pair or `coeffs`, the real
/// coefficients of a polynomial in the family parameter `t` (constant first).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorTerm {
    pub word: Vec<u16>,
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub coeffs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: usize,
    pub start: Option<f64>,
    pub end: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rank_tol: f64,
    /// Continuity flag threshold; 10 × grid step when absent.
    pub jump_threshold: Option<f64>,
    pub ineq_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank_tol: RANK_TOL, jump_threshold: None, ineq_slack: INEQ_SLACK }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrassmannConfig {
    pub degree: usize,
    pub modulus: f64,
    pub plucker_cap: usize,
}

impl Default for GrassmannConfig {
    fn default() -> Self {
        GrassmannConfig { degree: 2, modulus: 0.011, plucker_cap: DEFAULT_PLUCKER_CAP }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub count: usize,
    /// Matrix size of sampled tuples.
    pub n: usize,
    /// Row norm of random row contractions.
    pub row_norm: f64,
    pub variety: VarietyKind,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { count: 100, n: 3, row_norm: 0.9, variety: VarietyKind::Commutator }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Primary output (CSV or JSON); `--out` takes precedence.
    pub data: Option<PathBuf>,
    /// Continuity report of `norm-field`.
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub version: u32,
    pub d: usize,
    pub truncation: Option<usize>,
    #[serde(default)]
    pub generators: Vec<Vec<GeneratorTerm>>,
    /// Parameter value for commands that need a single ideal from a family.
    pub t: Option<f64>,
    pub domain: Option<[f64; 2]>,
    pub grid: Option<GridConfig>,
    pub poly: Option<Vec<TermRecord>>,
    pub radii: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grassmann: GrassmannConfig,
    pub tuple: Option<MatrixTupleRecord>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub suite: SuiteOptions,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
}

/// A parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub raw: RawConfig,
    pub poly: Option<FreePoly>,
    pub max_generator_degree: usize,
}

pub fn load(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: cannot read config: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "config".to_string() } else { path };
        ConfigError(format!("{path}: {}", e.inner()))
    })?;
    validate(raw)
}

fn check_word(path: &str, word: &[u16], d: usize) -> Result<(), ConfigError> {
    if let Err(e) = Word::new(word.to_vec()).validate(d) {
        return err(format!("{path}.word"), e);
    }
    Ok(())
}

fn validate(raw: RawConfig) -> Result<Config, ConfigError> {
    if raw.version != SCHEMA_VERSION {
        return err("version", format!("unsupported schema version {} (expected {SCHEMA_VERSION})", raw.version));
    }
    if raw.d == 0 {
        return err("d", "alphabet size must be at least 1");
    }
    let d = raw.d;

    let mut max_generator_degree = 0;
    for (i, g) in raw.generators.iter().enumerate() {
        let gpath = format!("generators[{i}]");
        if g.is_empty() {
            return err(&gpath, "generator has no terms");
        }
        let mut degree = None;
        for (j, term) in g.iter().enumerate() {
            let tpath = format!("{gpath}[{j}]");
            check_word(&tpath, &term.word, d)?;
            match (&term.coeffs, term.re, term.im) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    return err(&tpath, "give either re/im or coeffs, not both")
                }
                (None, None, _) => return err(&tpath, "missing coefficient: give re (and optionally im) or coeffs"),
                (Some(c), None, None) if c.is_empty() => return err(format!("{tpath}.coeffs"), "must not be empty"),
                _ => {}
            }
            match degree {
                None => degree = Some(term.word.len()),
                Some(k) if k != term.word.len() => {
                    return err(&gpath, "generators must be homogeneous (all words of one length)")
                }
                _ => {}
            }
        }
        let k = degree.unwrap_or(0);
        if k == 0 {
            return err(&gpath, "generators must have degree at least 1");
        }
        max_generator_degree = max_generator_degree.max(k);
    }

    let poly = match &raw.poly {
        None => None,
        Some(terms) => {
            for (i, t) in terms.iter().enumerate() {
                check_word(&format!("poly[{i}]"), &t.word, d)?;
            }
            Some(FreePoly::from_records(d, terms).or_else(|e| err("poly", e))?)
        }
    };

    if let Some(m) = raw.truncation {
        if m < max_generator_degree {
            return err("truncation", format!("{m} is below the generator degree {max_generator_degree}"));
        }
    }

    let tol = &raw.tolerances;
    if !(tol.rank_tol > 0.0) {
        return err("tolerances.rank_tol", "must be positive");
    }
    if !(tol.ineq_slack > 0.0) {
        return err("tolerances.ineq_slack", "must be positive");
    }
    if let Some(j) = tol.jump_threshold {
        if !(j > 0.0) {
            return err("tolerances.jump_threshold", "must be positive");
        }
    }
    if !(raw.grassmann.modulus > 0.0) {
        return err("grassmann.modulus", "must be positive");
    }

    if let Some([a, b]) = raw.domain {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return err("domain", format!("need finite a <= b, got [{a}, {b}]"));
        }
    }
    if let Some(g) = &raw.grid {
        if g.points == 0 {
            return err("grid.points", "must be at least 1");
        }
        let domain = raw.domain.ok_or_else(|| ConfigError("grid: requires domain".into()))?;
        for (name, v) in [("start", g.start), ("end", g.end)] {
            if let Some(v) = v {
                if !(v >= domain[0] && v <= domain[1]) {
                    return err(format!("grid.{name}"), format!("{v} lies outside the domain [{}, {}]", domain[0], domain[1]));
                }
            }
        }
        if g.start.unwrap_or(domain[0]) > g.end.unwrap_or(domain[1]) {
            return err("grid", "start exceeds end");
        }
    }

    if let Some(radii) = &raw.radii {
        if radii.is_empty() {
            return err("radii", "must not be empty");
        }
        for (i, r) in radii.iter().enumerate() {
            if !(*r > 0.0 && r.is_finite()) {
                return err(format!("radii[{i}]"), format!("radius must be positive, got {r}"));
            }
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return err("radii", "must be strictly increasing");
        }
    }

    if let Some(t) = &raw.tuple {
        if t.d != d {
            return err("tuple.d", format!("{} does not match d = {d}", t.d));
        }
        MatrixTuple::from_record(t).or_else(|e| err("tuple", e))?;
    }

    let s = &raw.sampling;
    if s.n == 0 || s.n > ncball::ncfunc::MAX_SAMPLE_N {
        return err("sampling.n", format!("must lie in [1, {}]", ncball::ncfunc::MAX_SAMPLE_N));
    }
    if !(s.row_norm > 0.0 && s.row_norm <= 1.0) {
        return err("sampling.row_norm", "must lie in (0, 1]");
    }
    if let Some(eps) = raw.suite.inject_perturbation {
        if !eps.is_finite() {
            return err("suite.inject_perturbation", "must be finite");
        }
    }

    Ok(Config { raw, poly, max_generator_degree })
}

impl Config {
    pub fn d(&self) -> usize {
        self.raw.d
    }

    pub fn seed(&self) -> u64 {
        self.raw.seed
    }

    pub fn rank_tol(&self) -> f64 {
        self.raw.tolerances.rank_tol
    }

    pub fn poly(&self, command: &str) -> Result<&FreePoly, ConfigError> {
        self.poly.as_ref().ok_or_else(|| ConfigError(format!("poly: required by {command}")))
    }

    /// The truncation, defaulting to the largest degree in play.
    pub fn truncation(&self) -> usize {
        let p = self.poly.as_ref().map_or(0, |p| p.degree().max(0) as usize);
        self.raw.truncation.unwrap_or(p.max(self.max_generator_degree))
    }

    pub fn truncation_for(&self, p: &FreePoly) -> Result<usize, ConfigError> {
        let m = self.truncation();
        let deg = p.degree().max(0) as usize;
        if deg > m {
            return err("truncation", format!("{m} is below the degree {deg} of poly"));
        }
        Ok(m)
    }

    fn depends_on_t(&self) -> bool {
        self.raw.generators.iter().flatten().any(|t| t.coeffs.is_some())
    }

    fn family_records(&self) -> Result<Vec<Vec<FamilyTermRecord>>, ConfigError> {
        let mut out = Vec::new();
        for (i, g) in self.raw.generators.iter().enumerate() {
            let mut terms = Vec::new();
            for (j, term) in g.iter().enumerate() {
                let coeffs = match (&term.coeffs, term.re, term.im) {
                    (Some(c), _, _) => c.clone(),
                    (None, Some(re), im) => {
                        if im.unwrap_or(0.0) != 0.0 {
                            return err(
                                format!("generators[{i}][{j}].im"),
                                "family generators must have real coefficients",
                            );
                        }
                        vec![re]
                    }
                    (None, None, _) => unreachable!("validated"),
                };
                terms.push(FamilyTermRecord { word: term.word.clone(), coeffs });
            }
            out.push(terms);
        }
        Ok(out)
    }

    pub fn domain(&self) -> Result<(f64, f64), ConfigError> {
        let [a, b] = self.raw.domain.ok_or_else(|| ConfigError("domain: required for parameter families".into()))?;
        Ok((a, b))
    }

    pub fn family(&self) -> Result<IdealFamily, ConfigError> {
        let records = self.family_records()?;
        IdealFamily::new(self.d(), self.domain()?, &records).or_else(|e| err("generators", e))
    }

    pub fn grid(&self) -> Result<Grid, ConfigError> {
        let g = self.raw.grid.as_ref().ok_or_else(|| ConfigError("grid: required by this command".into()))?;
        let (a, b) = self.domain()?;
        Grid::uniform(g.start.unwrap_or(a), g.end.unwrap_or(b), g.points).or_else(|e| err("grid", e))
    }

    /// Generators at the configured `t` (or as constants).
    pub fn generators(&self) -> Result<Vec<FreePoly>, ConfigError> {
        if self.depends_on_t() {
            let t = self.raw.t.ok_or_else(|| ConfigError("t: required because generators depend on t".into()))?;
            let family = self.family()?;
            if let Err(e) = family.check_grid(&Grid::from_points(vec![t]).or_else(|e| err("t", e))?) {
                return err("t", e);
            }
            return Ok(family.generators_at(t));
        }
        self.raw
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let records: Vec<TermRecord> = g
                    .iter()
                    .map(|t| TermRecord { word: t.word.clone(), re: t.re.unwrap_or(0.0), im: t.im.unwrap_or(0.0) })
                    .collect();
                FreePoly::from_records(self.d(), &records).or_else(|e| err(format!("generators[{i}]"), e))
            })
            .collect()
    }

    pub fn ideal(&self, cutoff: usize) -> Result<GradedIdealBasis, ConfigError> {
        let gens = self.generators()?;
        GradedIdealBasis::saturate(self.d(), &gens, cutoff, self.rank_tol()).or_else(|e| err("generators", e))
    }

    pub fn tuple(&self) -> Result<MatrixTuple, ConfigError> {
        let rec = self.raw.tuple.as_ref().ok_or_else(|| ConfigError("tuple: required by eval".into()))?;
        MatrixTuple::from_record(rec).or_else(|e| err("tuple", e))
    }

    pub fn radii(&self) -> Result<&[f64], ConfigError> {
        self.raw.radii.as_deref().ok_or_else(|| ConfigError("radii: required by tower-check".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> String {
        parse(text).unwrap_err().0
    }

    #[test]
    fn minimal_config() {
        let c = parse(r#"{"version": 1, "d": 2}"#).unwrap();
        assert_eq!(c.truncation(), 0);
        assert_eq!(c.seed(), 0);
    }

    #[test]
    fn unknown_keys_name_their_path() {
        let e = parse_err(r#"{"version": 1, "d": 2, "tolerances": {"rank_tol": 1e-9, "bogus": 1}}"#);
        assert!(e.starts_with("tolerances"), "{e}");
        assert!(e.contains("bogus"), "{e}");
    }

    #[test]
    fn bad_letter_names_the_word() {
        let e = parse_err(
            r#"{"version": 1, "d": 2, "generators": [[{"word": [1, 2], "re": 1}, {"word": [3, 1], "re": -1}]]}"#,
        );
        assert!(e.starts_with("generators[0][1].word:"), "{e}");
    }

    #[test]
    fn version_is_checked() {
        assert!(parse_err(r#"{"version": 2, "d": 2}"#).starts_with("version:"));
        assert!(parse_err(r#"{"d": 2}"#).contains("version"));
    }

    #[test]
    fn semantic_checks() {
        assert!(parse_err(r#"{"version": 1, "d": 2, "tolerances": {"rank_tol": 0}}"#).starts_with("tolerances.rank_tol"));
        assert!(parse_err(r#"{"version": 1, "d": 2, "generators": [[{"word": [1, 2], "re": 1}]], "truncation": 1}"#)
            .starts_with("truncation"));
        assert!(parse_err(r#"{"version": 1, "d": 2, "domain": [0, 1], "grid": {"points": 5, "end": 2}}"#)
            .starts_with("grid.end"));
        assert!(parse_err(r#"{"version": 1, "d": 2, "radii": [0.5, 0.3]}"#).starts_with("radii"));
        assert!(parse_err(r#"{"version": 1, "d": 2, "generators": [[{"word": [1], "re": 1, "coeffs": [1]}]]}"#)
            .starts_with("generators[0][0]"));
    }

    #[test]
    fn t_dependent_generators() {
        let c = parse(
            r#"{"version": 1, "d": 2, "domain": [0, 1], "t": 0.5,
                "generators": [[{"word": [1, 2], "re": 1}, {"word": [2, 1], "coeffs": [0, -1]}]]}"#,
        )
        .unwrap();
        let g = c.generators().unwrap();
        assert_eq!(g[0], FreePoly::from_real(2, &[(&[1, 2], 1.0), (&[2, 1], -0.5)]).unwrap());
    }
}
