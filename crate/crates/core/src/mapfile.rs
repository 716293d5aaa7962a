//! Plain-text map definitions.
//!
//! ```text
//! # phi(z1, z2) = (z1 / 2, z2)
//! dim 2
//! degree-bound 16
//! kind series
//! 1: 1 0: 0.5 0
//! 2: 0 1: 1 0
//! set budget 512
//! ```
//!
//! Series terms read `i: m1 ... mn: re im` with a 1-based component `i`.
//! `kind linear` takes `entry i l: re im` lines (1-based row and column).
//! `kind automorphism` takes one `center: re im ...` line and optional
//! `unitary i l: re im` lines; the unitary defaults to the identity.
//! `set <key> <value>` overrides an analysis parameter. `#` starts a comment.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::ergodicity::ErgodicityConfig;
use crate::error::{Error, Result};
use crate::holomap::{HoloMap, DEFAULT_DEGREE_BOUND};
use crate::linalg::{self, CMatrix};
use crate::poly::{MultiIndex, Polynomial};
use crate::vec::ComplexVec;

#[derive(Debug, Clone, PartialEq)]
pub enum MapDefinition {
    Series(Vec<Polynomial>),
    Linear(CMatrix),
    Automorphism { center: ComplexVec, unitary: CMatrix },
}

/// Analysis parameters set inside a map file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub budget: Option<usize>,
    pub kmax: Option<usize>,
    pub seed: Option<u64>,
    pub grid_depth: Option<u32>,
    pub directions: Option<usize>,
    pub decay_threshold: Option<f64>,
    pub nondecay_factor: Option<f64>,
    pub cesaro_horizon: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ErgodicityConfig) {
        if let Some(seed) = self.seed {
            *config = config.with_seed(seed);
        }
        if let Some(v) = self.budget {
            config.budget = v;
        }
        if let Some(v) = self.kmax {
            config.retraction.k_max = v;
        }
        if let Some(v) = self.grid_depth {
            config.grid.depth = v;
        }
        if let Some(v) = self.directions {
            config.grid.directions = v;
        }
        if let Some(v) = self.decay_threshold {
            config.decay_threshold = v;
        }
        if let Some(v) = self.nondecay_factor {
            config.nondecay_factor = v;
        }
        if let Some(v) = self.cesaro_horizon {
            config.cesaro_horizon = v;
        }
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |key, value: Option<String>| {
            if let Some(v) = value {
                out.push((key, v));
            }
        };
        push("budget", self.budget.map(|v| v.to_string()));
        push("kmax", self.kmax.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("grid-depth", self.grid_depth.map(|v| v.to_string()));
        push("directions", self.directions.map(|v| v.to_string()));
        push("decay-threshold", self.decay_threshold.map(|v| v.to_string()));
        push("nondecay-factor", self.nondecay_factor.map(|v| v.to_string()));
        push("cesaro-horizon", self.cesaro_horizon.map(|v| v.to_string()));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub dim: usize,
    pub degree_bound: usize,
    pub definition: MapDefinition,
    pub overrides: Overrides,
}

impl MapSpec {
    /// The map, not yet certified.
    pub fn build(&self) -> Result<HoloMap> {
        let map = match &self.definition {
            MapDefinition::Series(components) => HoloMap::from_components(components.clone(), self.degree_bound)?,
            MapDefinition::Linear(m) => HoloMap::linear(m.clone())?,
            MapDefinition::Automorphism { center, unitary } => {
                HoloMap::automorphism(center.clone(), unitary.clone())?
            }
        };
        map.with_degree_bound(self.degree_bound)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        let _ = writeln!(out, "degree-bound {}", self.degree_bound);
        match &self.definition {
            MapDefinition::Series(components) => {
                out.push_str("kind series\n");
                for (i, p) in components.iter().enumerate() {
                    for (m, c) in p.terms() {
                        let _ = writeln!(out, "{}: {}: {} {}", i + 1, m, c.re, c.im);
                    }
                }
            }
            MapDefinition::Linear(m) => {
                out.push_str("kind linear\n");
                write_entries(&mut out, "entry", m, false);
            }
            MapDefinition::Automorphism { center, unitary } => {
                out.push_str("kind automorphism\ncenter:");
                for c in center.iter() {
                    let _ = write!(out, " {} {}", c.re, c.im);
                }
                out.push('\n');
                write_entries(&mut out, "unitary", unitary, true);
            }
        }
        for (key, value) in self.overrides.entries() {
            let _ = writeln!(out, "set {key} {value}");
        }
        out
    }
}

fn write_entries(out: &mut String, label: &str, m: &CMatrix, skip_identity: bool) {
    let identity = linalg::identity(m.nrows());
    for i in 0..m.nrows() {
        for l in 0..m.ncols() {
            let c = m[(i, l)];
            if c == Complex64::new(0.0, 0.0) || (skip_identity && c == identity[(i, l)]) {
                continue;
            }
            let _ = writeln!(out, "{label} {} {}: {} {}", i + 1, l + 1, c.re, c.im);
        }
    }
    if skip_identity {
        for i in 0..m.nrows() {
            if m[(i, i)] == Complex64::new(0.0, 0.0) {
                let _ = writeln!(out, "{label} {} {}: 0 0", i + 1, i + 1);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Series,
    Linear,
    Automorphism,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{token}'")))
}

fn complex(line: usize, tokens: &[&str]) -> Result<Complex64> {
    match tokens {
        [re, im] => {
            let c = Complex64::new(number(line, re, "real part")?, number(line, im, "imaginary part")?);
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(parse_err(line, "non-finite coefficient"));
            }
            Ok(c)
        }
        _ => Err(parse_err(line, "expected a coefficient 're im'")),
    }
}

fn index(line: usize, token: &str, dim: usize, what: &str) -> Result<usize> {
    let i: usize = number(line, token, what)?;
    if i == 0 || i > dim {
        return Err(parse_err(line, format!("{what} {i} out of range 1..={dim}")));
    }
    Ok(i - 1)
}

struct Header {
    dim: Option<usize>,
    degree_bound: usize,
    kind: Option<Kind>,
}

impl Header {
    fn dim(&self, line: usize) -> Result<usize> {
        self.dim.ok_or_else(|| parse_err(line, "'dim' must precede map data"))
    }

    fn kind(&self, line: usize, expected: Kind, what: &str) -> Result<()> {
        match self.kind {
            Some(k) if k == expected => Ok(()),
            _ => Err(parse_err(line, format!("'{what}' lines need the matching 'kind' declared first"))),
        }
    }
}

pub fn parse(text: &str) -> Result<MapSpec> {
    let mut header = Header {
        dim: None,
        degree_bound: DEFAULT_DEGREE_BOUND,
        kind: None,
    };
    let mut terms: Vec<(usize, usize, MultiIndex, Complex64)> = Vec::new();
    let mut entries: Vec<(usize, usize, usize, Complex64)> = Vec::new();
    let mut unitary_entries: Vec<(usize, usize, usize, Complex64)> = Vec::new();
    let mut center: Option<ComplexVec> = None;
    let mut overrides = Overrides::default();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "dim" => {
                let [_, n] = words[..] else {
                    return Err(parse_err(line, "expected 'dim <n>'"));
                };
                let n: usize = number(line, n, "dimension")?;
                if n == 0 {
                    return Err(parse_err(line, "dimension must be positive"));
                }
                if header.dim.replace(n).is_some() {
                    return Err(parse_err(line, "duplicate 'dim'"));
                }
            }
            "degree-bound" => {
                let [_, d] = words[..] else {
                    return Err(parse_err(line, "expected 'degree-bound <D>'"));
                };
                header.degree_bound = number(line, d, "degree bound")?;
            }
            "kind" => {
                let kind = match words.get(1).copied() {
                    Some("series") if words.len() == 2 => Kind::Series,
                    Some("linear") if words.len() == 2 => Kind::Linear,
                    Some("automorphism") if words.len() == 2 => Kind::Automorphism,
                    _ => return Err(parse_err(line, "expected 'kind series|linear|automorphism'")),
                };
                if header.kind.replace(kind).is_some() {
                    return Err(parse_err(line, "duplicate 'kind'"));
                }
            }
            "set" => {
                let [_, key, value] = words[..] else {
                    return Err(parse_err(line, "expected 'set <key> <value>'"));
                };
                match key {
                    "budget" => overrides.budget = Some(number(line, value, key)?),
                    "kmax" => overrides.kmax = Some(number(line, value, key)?),
                    "seed" => overrides.seed = Some(number(line, value, key)?),
                    "grid-depth" => overrides.grid_depth = Some(number(line, value, key)?),
                    "directions" => overrides.directions = Some(number(line, value, key)?),
                    "decay-threshold" => overrides.decay_threshold = Some(number(line, value, key)?),
                    "nondecay-factor" => overrides.nondecay_factor = Some(number(line, value, key)?),
                    "cesaro-horizon" => overrides.cesaro_horizon = Some(number(line, value, key)?),
                    _ => return Err(parse_err(line, format!("unknown setting '{key}'"))),
                }
            }
            "entry" | "unitary" => {
                let dim = header.dim(line)?;
                let (labels, coeff) = split_colon(line, content, 2)?;
                let [_, i, l] = labels.split_whitespace().collect::<Vec<_>>()[..] else {
                    return Err(parse_err(line, format!("expected '{} i l: re im'", words[0])));
                };
                let c = complex(line, &coeff.split_whitespace().collect::<Vec<_>>())?;
                let record = (line, index(line, i, dim, "row")?, index(line, l, dim, "column")?, c);
                if words[0] == "entry" {
                    header.kind(line, Kind::Linear, "entry")?;
                    entries.push(record);
                } else {
                    header.kind(line, Kind::Automorphism, "unitary")?;
                    unitary_entries.push(record);
                }
            }
            w if w.starts_with("center") => {
                let dim = header.dim(line)?;
                header.kind(line, Kind::Automorphism, "center")?;
                let (label, values) = split_colon(line, content, 2)?;
                if label.trim() != "center" {
                    return Err(parse_err(line, "expected 'center: re im ...'"));
                }
                let values: Vec<&str> = values.split_whitespace().collect();
                if values.len() != 2 * dim {
                    return Err(parse_err(line, format!("center needs {} numbers", 2 * dim)));
                }
                let c = values
                    .chunks(2)
                    .map(|pair| complex(line, pair))
                    .collect::<Result<Vec<_>>>()?;
                if center.replace(ComplexVec::new(c)).is_some() {
                    return Err(parse_err(line, "duplicate 'center'"));
                }
            }
            _ => {
                let dim = header.dim(line)?;
                if header.kind.is_none() {
                    header.kind = Some(Kind::Series);
                }
                header.kind(line, Kind::Series, "term")?;
                let content = content.strip_prefix("term").unwrap_or(content);
                let (component, rest) = split_colon(line, content, 3)?;
                let (exponents, coeff) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(line, "expected 'i: m1 ... mn: re im'"))?;
                let i = index(line, component.trim(), dim, "component")?;
                let exps = exponents
                    .split_whitespace()
                    .map(|t| number::<u32>(line, t, "exponent"))
                    .collect::<Result<Vec<_>>>()?;
                if exps.len() != dim {
                    return Err(parse_err(line, format!("expected {dim} exponents, found {}", exps.len())));
                }
                let c = complex(line, &coeff.split_whitespace().collect::<Vec<_>>())?;
                terms.push((line, i, MultiIndex::new(exps), c));
            }
        }
    }

    let end = text.lines().count().max(1);
    let dim = header.dim(end)?;
    let definition = match header.kind {
        Some(Kind::Series) | None => {
            let mut components = vec![Polynomial::zero(dim); dim];
            for (_, i, m, c) in terms {
                components[i].add_term(m, c);
            }
            MapDefinition::Series(components)
        }
        Some(Kind::Linear) => {
            let mut m = CMatrix::zeros(dim, dim);
            for (_, i, l, c) in entries {
                m[(i, l)] += c;
            }
            MapDefinition::Linear(m)
        }
        Some(Kind::Automorphism) => {
            let center = center.ok_or_else(|| parse_err(end, "automorphism needs a 'center' line"))?;
            let mut unitary = linalg::identity(dim);
            let mut seen = vec![false; dim * dim];
            for (_, i, l, c) in unitary_entries {
                if !seen[i * dim + l] {
                    unitary[(i, l)] = Complex64::new(0.0, 0.0);
                    seen[i * dim + l] = true;
                }
                unitary[(i, l)] += c;
            }
            MapDefinition::Automorphism { center, unitary }
        }
    };
    Ok(MapSpec {
        dim,
        degree_bound: header.degree_bound,
        definition,
        overrides,
    })
}

/// Splits at the first `:` and checks the line has between 2 and `max_parts`
/// colon-separated parts.
fn split_colon(line: usize, content: &str, max_parts: usize) -> Result<(&str, &str)> {
    let parts = content.split(':').count();
    if parts < 2 || parts > max_parts {
        return Err(parse_err(line, "malformed line"));
    }
    content
        .split_once(':')
        .ok_or_else(|| parse_err(line, "missing ':'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_series() {
        let spec = parse("# half\ndim 1\n1: 1: 0.5 0\n").unwrap();
        let map = spec.build().unwrap();
        let w = map.evaluate(&ComplexVec::from_real(&[0.8])).unwrap();
        assert_eq!(w[0], Complex64::new(0.4, 0.0));
        assert_eq!(spec.degree_bound, DEFAULT_DEGREE_BOUND);
    }

    #[test]
    fn parses_linear_and_overrides() {
        let spec = parse("dim 2\nkind linear\nentry 1 1: 0.5 0\nentry 2 2: 1 0\nset budget 64\nset seed 7\n").unwrap();
        assert_eq!(spec.overrides.budget, Some(64));
        let mut cfg = ErgodicityConfig::default();
        spec.overrides.apply(&mut cfg);
        assert_eq!((cfg.budget, cfg.grid.seed, cfg.retraction.seed), (64, 7, 7));
        let w = spec.build().unwrap().evaluate(&ComplexVec::from_real(&[0.2, 0.4])).unwrap();
        assert_eq!(w, ComplexVec::from_real(&[0.1, 0.4]));
    }

    #[test]
    fn parses_automorphism() {
        let spec = parse("dim 1\nkind automorphism\ncenter: -0.5 0\nunitary 1 1: -1 0\n").unwrap();
        let map = spec.build().unwrap();
        let w = map.evaluate(&ComplexVec::from_real(&[0.0])).unwrap();
        assert!((w[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trips() {
        for text in [
            "dim 2\ndegree-bound 8\nkind series\n1: 1 0: 0.5 0\n1: 0 2: 0 0.25\n2: 0 1: 1 0\nset kmax 6\n",
            "dim 2\nkind linear\nentry 1 2: 0.5 -0.125\nentry 2 2: 1 0\n",
            "dim 2\nkind automorphism\ncenter: 0.25 0 0 -0.1\nunitary 1 1: 0 0\nunitary 1 2: 1 0\nunitary 2 1: 1 0\nunitary 2 2: 0 0\n",
        ] {
            let spec = parse(text).unwrap();
            assert_eq!(parse(&spec.to_text()).unwrap(), spec, "{text}");
        }
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("dim 1\n1: 1 0.5 0\n", 2),
            ("1: 1: 0.5 0\n", 1),
            ("dim 1\n2: 1: 0.5 0\n", 2),
            ("dim 1\n1: 1 1: 0.5 0\n", 2),
            ("dim 1\nset speed 3\n", 2),
            ("dim 1\n\n1: 1: x 0\n", 3),
            ("dim 1\nkind linear\n1: 1: 1 0\n", 3),
            ("dim 1\nkind automorphism\n", 2),
        ];
        for (text, expected) in cases {
            match parse(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
