//! Line-based surface definition files.
//!
//! ```text
//! # Scherk surface
//! f = (2/c)*log(cos(c*u/2))
//! g = -(2/c)*log(cos(c*v/2))
//! param.c = 1
//! u_min = -2.9
//! u_max = 2.9
//! v_min = -2.9
//! v_max = 2.9
//! nu = 50
//! nv = 50
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;
use tsurf_core::{parse, Domain, Expr, SurfaceDef};

pub const DEFAULT_GRID: usize = 50;

#[derive(Debug, Error)]
pub enum SurfaceFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Surface(String),
}

/// Grid resolution, at least 2 along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
}

#[derive(Debug)]
pub struct SurfaceFile {
    pub surface: SurfaceDef,
    pub grid: GridSpec,
}

fn line_error(line: usize, message: impl Into<String>) -> SurfaceFileError {
    SurfaceFileError::Line {
        line,
        message: message.into(),
    }
}

pub fn read_surface_file(path: &Path) -> Result<SurfaceFile, SurfaceFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| SurfaceFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_surface_file(&text)
}

pub fn parse_surface_file(text: &str) -> Result<SurfaceFile, SurfaceFileError> {
    let mut f: Option<(usize, Expr)> = None;
    let mut g: Option<(usize, Expr)> = None;
    let mut params = BTreeMap::new();
    let mut bounds = [-1.0, 1.0, -1.0, 1.0];
    let mut grid = [DEFAULT_GRID, DEFAULT_GRID];
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| line_error(line, format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(first) = seen.insert(key.to_string(), line) {
            return Err(line_error(
                line,
                format!("duplicate key `{key}` (first set on line {first})"),
            ));
        }
        let number = || {
            value
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| line_error(line, format!("`{key}` needs a finite number, found `{value}`")))
        };
        let count = || {
            value
                .parse::<usize>()
                .ok()
                .filter(|n| *n >= 2)
                .ok_or_else(|| line_error(line, format!("`{key}` needs an integer of at least 2, found `{value}`")))
        };
        let expr = |var: &str| parse(value, var).map_err(|e| line_error(line, format!("`{key}`: {e}")));
        match key {
            "f" => f = Some((line, expr("u")?)),
            "g" => g = Some((line, expr("v")?)),
            "u_min" => bounds[0] = number()?,
            "u_max" => bounds[1] = number()?,
            "v_min" => bounds[2] = number()?,
            "v_max" => bounds[3] = number()?,
            "nu" => grid[0] = count()?,
            "nv" => grid[1] = count()?,
            _ => match key.strip_prefix("param.") {
                Some(name) if is_identifier(name) => {
                    params.insert(name.to_string(), number()?);
                }
                Some(name) => return Err(line_error(line, format!("invalid parameter name `{name}`"))),
                None => return Err(line_error(line, format!("unknown key `{key}`"))),
            },
        }
    }

    let (f_line, f) = f.ok_or(SurfaceFileError::Missing("f"))?;
    let (g_line, g) = g.ok_or(SurfaceFileError::Missing("g"))?;
    for (line, e) in [(f_line, &f), (g_line, &g)] {
        if let Some(name) = e.parameters().into_iter().find(|p| !params.contains_key(p)) {
            return Err(line_error(
                line,
                format!("parameter `{name}` has no `param.{name}` line"),
            ));
        }
    }
    let domain = Domain::new(bounds[0], bounds[1], bounds[2], bounds[3])
        .map_err(|e| SurfaceFileError::Surface(e.to_string()))?;
    let surface = SurfaceDef::new(f, g, params, domain).map_err(|e| SurfaceFileError::Surface(e.to_string()))?;
    Ok(SurfaceFile {
        surface,
        grid: GridSpec {
            nu: grid[0],
            nv: grid[1],
        },
    })
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let text = "# comment\nf = (2/c)*log(cos(c*u/2))  # trailing\ng = -(2/c)*log(cos(c*v/2))\nparam.c = 1\n\nu_min = -2.9\nu_max = 2.9\nv_min = -2.9\nv_max = 2.9\nnu = 20\nnv = 30\n";
        let file = parse_surface_file(text).unwrap();
        assert_eq!(file.grid, GridSpec { nu: 20, nv: 30 });
        assert_eq!(file.surface.domain().u_max, 2.9);
        assert_eq!(file.surface.params()["c"], 1.0);
    }

    #[test]
    fn defaults() {
        let file = parse_surface_file("f = u^2\ng = v^2\n").unwrap();
        assert_eq!(file.grid, GridSpec { nu: 50, nv: 50 });
        assert_eq!(file.surface.domain(), Domain::square(-1.0, 1.0).unwrap());
    }

    fn line_of(text: &str) -> usize {
        match parse_surface_file(text) {
            Err(SurfaceFileError::Line { line, .. }) => line,
            other => panic!("expected a line error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of("f = u\ng = v\ncolour = red\n"), 3);
        assert_eq!(line_of("f = u\n\ng = v +* 2\n"), 3);
        assert_eq!(line_of("f = u\ng = v\nnu = 1\n"), 3);
        assert_eq!(line_of("f = u\ng = v\nu_min = abc\n"), 3);
        assert_eq!(line_of("f = u\nf = u\n"), 2);
        assert_eq!(line_of("f = a*u\ng = v\n"), 1);
        assert_eq!(line_of("f = u\njust text\n"), 2);
        assert_eq!(line_of("f = v\ng = v\n"), 1);
    }

    #[test]
    fn missing_and_empty() {
        assert!(matches!(
            parse_surface_file("g = v\n"),
            Err(SurfaceFileError::Missing("f"))
        ));
        assert!(matches!(
            parse_surface_file("f = u\ng = v\nu_min = 2\nu_max = 1\n"),
            Err(SurfaceFileError::Surface(_))
        ));
    }
}
