//! Plain-text state-vector files: the first line holds `N`, then `N` lines
//! of `re im`, written with enough digits to round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

pub fn to_text(state: &StateVector) -> String {
    let mut out = String::with_capacity(48 * (state.dim() + 1));
    let _ = writeln!(out, "{}", state.dim());
    for a in state.amplitudes() {
        // `{:e}` is the shortest round-trip representation.
        let _ = writeln!(out, "{:e} {:e}", a.re, a.im);
    }
    out
}

pub fn from_text(text: &str) -> Result<StateVector> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::StateFile("empty file".into()))?;
    let dim: usize = header
        .parse()
        .map_err(|_| Error::StateFile(format!("line 1: expected N, found {header:?}")))?;
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut amplitudes = Vec::with_capacity(dim);
    for (lineno, line) in lines {
        let bad = || Error::StateFile(format!("line {}: expected \"re im\"", lineno + 1));
        let mut parts = line.split_whitespace();
        let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let im: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        amplitudes.push(Complex64::new(re, im));
    }
    if amplitudes.len() != dim {
        return Err(Error::StateFile(format!(
            "header says N = {dim} but {} amplitudes follow",
            amplitudes.len()
        )));
    }
    StateVector::from_amplitudes(amplitudes)
}

pub fn read(path: &Path) -> Result<StateVector> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))?;
    from_text(&text)
}

pub fn write(path: &Path, state: &StateVector) -> Result<()> {
    fs::write(path, to_text(state))
        .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))
}
