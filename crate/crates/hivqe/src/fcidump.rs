//! FCIDUMP reading and writing.
//!
//! Indices are 1-based in the file and 0-based in [`IntegralSet`]. The
//! writer emits two-body entries in canonical index order, then one-body
//! entries, then the core energy, which is also the order PySCF uses.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use hivqe_core::integrals::canonical_index;
use hivqe_core::IntegralSet;
use sha2::{Digest, Sha256};

/// Entries for the same canonical index may differ by this much before the
/// file is rejected as inconsistent.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum FcidumpError {
    #[error("malformed header near `{token}`: {reason}")]
    Header { token: String, reason: &'static str },
    #[error("line {line}: cannot parse `{token}`")]
    Body { line: usize, token: String },
    #[error("line {line}: index {index} outside 0..={n_orb}")]
    Bounds {
        line: usize,
        index: usize,
        n_orb: usize,
    },
    #[error(
        "line {line}: {what} entry {indices:?} is {value:e} but line {first_line} gave {first:e}"
    )]
    Consistency {
        line: usize,
        what: &'static str,
        indices: [usize; 4],
        value: f64,
        first_line: usize,
        first: f64,
    },
    #[error(transparent)]
    Domain(#[from] hivqe_core::Error),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

struct Header {
    n_orb: usize,
    n_elec: usize,
    ms2: i32,
}

fn header_error(token: &str, reason: &'static str) -> FcidumpError {
    FcidumpError::Header {
        token: token.trim().to_string(),
        reason,
    }
}

/// Position just past the namelist terminator (`&END` or `/`), and the
/// header text between `&FCI` and it.
fn split_header(text: &str) -> Result<(&str, usize), FcidumpError> {
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    if trimmed.len() < 4 || !trimmed[..4].eq_ignore_ascii_case("&FCI") {
        let first = trimmed.split_whitespace().next().unwrap_or("");
        return Err(header_error(first, "expected the file to start with &FCI"));
    }
    let body = &trimmed[4..];
    let upper = body.to_ascii_uppercase();
    let amp = upper.find("&END");
    let slash = body.find('/');
    let (end, term_len) = match (amp, slash) {
        (Some(a), Some(s)) if s < a => (s, 1),
        (Some(a), _) => (a, 4),
        (None, Some(s)) => (s, 1),
        (None, None) => {
            return Err(header_error(
                "&FCI",
                "namelist terminator &END or / not found",
            ))
        }
    };
    Ok((&body[..end], offset + 4 + end + term_len))
}

/// Splits `K1=v1,K2=v2,...` into pairs. Values may themselves be comma
/// lists (ORBSYM).
fn assignments(header: &str) -> Result<Vec<(String, String)>, FcidumpError> {
    let pieces: Vec<&str> = header.split('=').collect();
    if pieces.len() < 2 {
        return Err(header_error(header, "no KEY=value assignments"));
    }
    let trailing_key = |seg: &str| -> Option<(usize, String)> {
        let t = seg.trim_end();
        let start = t
            .char_indices()
            .rev()
            .take_while(|(_, c)| c.is_ascii_alphanumeric() || *c == '_')
            .last()
            .map(|(i, _)| i)?;
        let key = &t[start..];
        key.starts_with(|c: char| c.is_ascii_alphabetic())
            .then(|| (start, key.to_ascii_uppercase()))
    };
    let first = pieces[0].trim();
    let (_, mut key) = trailing_key(first).ok_or_else(|| header_error(first, "expected a key"))?;
    if first.len() != key.len() {
        return Err(header_error(first, "unexpected text before the first key"));
    }
    let mut out = Vec::new();
    for (i, seg) in pieces.iter().enumerate().skip(1) {
        let (value, next) = if i + 1 == pieces.len() {
            (*seg, None)
        } else {
            let (at, k) = trailing_key(seg)
                .ok_or_else(|| header_error(seg, "value is not followed by a key"))?;
            (&seg[..at], Some(k))
        };
        let value = value.trim().trim_end_matches(',').trim();
        if value.is_empty() {
            return Err(header_error(&key, "missing value"));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(header_error(&key, "key given twice"));
        }
        out.push((std::mem::take(&mut key), value.to_string()));
        if let Some(k) = next {
            key = k;
        }
    }
    Ok(out)
}

fn parse_header(text: &str) -> Result<Header, FcidumpError> {
    let pairs = assignments(text)?;
    let get = |k: &str| {
        pairs
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.as_str())
    };
    let int = |k: &'static str, required: bool| -> Result<Option<i64>, FcidumpError> {
        match get(k) {
            None if required => Err(header_error(k, "required key missing")),
            None => Ok(None),
            Some(v) => v
                .parse::<i64>()
                .map(Some)
                .map_err(|_| header_error(&format!("{k}={v}"), "expected an integer")),
        }
    };
    for k in ["UHF", "IUHF"] {
        if let Some(v) = get(k) {
            let v = v.trim_matches('.').to_ascii_uppercase();
            if !(v == "F" || v == "FALSE" || v == "0") {
                return Err(header_error(
                    &format!("{k}={v}"),
                    "unrestricted integrals are not supported",
                ));
            }
        }
    }
    let n_orb = int("NORB", true)?.unwrap_or_default();
    let n_elec = int("NELEC", true)?.unwrap_or_default();
    let ms2 = int("MS2", false)?.unwrap_or(0);
    int("ISYM", false)?;
    if n_orb < 1 {
        return Err(header_error(&format!("NORB={n_orb}"), "must be positive"));
    }
    if let Some(v) = get("ORBSYM") {
        let labels: Vec<&str> = v.split(',').map(str::trim).collect();
        if labels.len() != n_orb as usize || labels.iter().any(|l| l.parse::<u32>().is_err()) {
            return Err(header_error(
                &format!("ORBSYM={v}"),
                "expected NORB integer labels",
            ));
        }
    }
    if n_elec < 0 {
        return Err(header_error(
            &format!("NELEC={n_elec}"),
            "must not be negative",
        ));
    }
    let ms2 =
        i32::try_from(ms2).map_err(|_| header_error(&format!("MS2={ms2}"), "out of range"))?;
    Ok(Header {
        n_orb: n_orb as usize,
        n_elec: n_elec as usize,
        ms2,
    })
}

fn parse_value(token: &str, line: usize) -> Result<f64, FcidumpError> {
    let fixed: String = token
        .chars()
        .map(|c| if c == 'd' || c == 'D' { 'e' } else { c })
        .collect();
    fixed
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| FcidumpError::Body {
            line,
            token: token.to_string(),
        })
}

/// Parses FCIDUMP text. Absent entries read as zero; ORBSYM and ISYM are
/// read and ignored, as are orbital-energy lines (`e i 0 0 0`).
pub fn parse_fcidump(text: &str) -> Result<IntegralSet, FcidumpError> {
    let (header, body_start) = split_header(text)?;
    let h = parse_header(header)?;
    let mut s = IntegralSet::new(h.n_orb, h.n_elec, h.ms2)?;
    let first_body_line = text[..body_start].lines().count();

    let mut seen: HashMap<[usize; 4], (f64, usize)> = HashMap::new();
    // The terminator may share a line with trailing text; start at the next one.
    let rest = &text[body_start..];
    let rest = rest.split_once('\n').map_or("", |(_, r)| r);
    for (offset, raw) in rest.lines().enumerate() {
        let line = first_body_line + 1 + offset;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 5 {
            return Err(FcidumpError::Body {
                line,
                token: raw.trim().to_string(),
            });
        }
        let value = parse_value(tokens[0], line)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&tokens[1..]) {
            *slot = tok.parse::<usize>().map_err(|_| FcidumpError::Body {
                line,
                token: tok.to_string(),
            })?;
            if *slot > h.n_orb {
                return Err(FcidumpError::Bounds {
                    line,
                    index: *slot,
                    n_orb: h.n_orb,
                });
            }
        }
        let [i, j, k, l] = idx;
        let (what, key) = match (i > 0, j > 0, k > 0, l > 0) {
            (false, false, false, false) => ("core", [0; 4]),
            (true, true, false, false) => ("one-body", [i.min(j), i.max(j), 0, 0]),
            (true, true, true, true) => {
                let (p, q, r, t) = canonical_index(i - 1, j - 1, k - 1, l - 1);
                ("two-body", [p + 1, q + 1, r + 1, t + 1])
            }
            (true, false, false, false) => continue,
            _ => {
                return Err(FcidumpError::Body {
                    line,
                    token: format!("{i} {j} {k} {l}"),
                })
            }
        };
        if let Some(&(first, first_line)) = seen.get(&key) {
            if (first - value).abs() > DUPLICATE_TOLERANCE {
                return Err(FcidumpError::Consistency {
                    line,
                    what,
                    indices: idx,
                    value,
                    first_line,
                    first,
                });
            }
            continue;
        }
        seen.insert(key, (value, line));
        match what {
            "core" => s.set_core_energy(value),
            "one-body" => s.set_one_body(i - 1, j - 1, value),
            _ => s.set_two_body(i - 1, j - 1, k - 1, l - 1, value),
        }
    }
    Ok(s)
}

pub fn read_fcidump(path: &Path) -> Result<IntegralSet, FcidumpError> {
    let text = std::fs::read_to_string(path).map_err(|source| FcidumpError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_fcidump(&text)
}

/// Canonical FCIDUMP rendering. Values use the shortest exponent form that
/// parses back to the same double.
pub fn write_fcidump(s: &IntegralSet) -> String {
    let n = s.n_orb();
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", s.n_elec(), s.ms2());
    let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
    let _ = writeln!(out, "  ISYM=1,");
    out.push_str(" &END\n");
    for ((p, q, r, t), v) in s.two_body_entries() {
        let _ = writeln!(
            out,
            "{v:>24e} {:>3} {:>3} {:>3} {:>3}",
            p + 1,
            q + 1,
            r + 1,
            t + 1
        );
    }
    for (p, q, v) in s.one_body_entries() {
        // lower triangle first index, as other writers do
        let _ = writeln!(out, "{v:>24e} {:>3} {:>3} {:>3} {:>3}", q + 1, p + 1, 0, 0);
    }
    let _ = writeln!(
        out,
        "{:>24e} {:>3} {:>3} {:>3} {:>3}",
        s.core_energy(),
        0,
        0,
        0,
        0
    );
    out
}

/// Hex SHA-256 of the canonical rendering, used to check that runs being
/// compared share a Hamiltonian.
pub fn fingerprint(s: &IntegralSet) -> String {
    hex::encode(Sha256::digest(write_fcidump(s).as_bytes()))
}
