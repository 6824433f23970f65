//! Pair and prior files.
//!
//! Pairs: header `ux,uy,uz,vx,vy,vz,w`, one correspondence per line.
//! Priors: header `w,a,c1,c2,c3`, one rotor measurement per line.
//! Lines starting with `#` and blank lines are ignored; the header line is
//! optional. Floats are written in shortest round-trip form.

use std::fmt;
use std::io::{Read, Write};

use crate::align::{RotorMeasurement, WeightedPair};
use crate::ga::Rotor;

pub const PAIR_HEADER: [&str; 7] = ["ux", "uy", "uz", "vx", "vy", "vz", "w"];
pub const PRIOR_HEADER: [&str; 5] = ["w", "a", "c1", "c2", "c3"];

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based; 0 when the failure is not tied to a line.
    pub line: u64,
    /// 1-based field index; 0 for whole-line errors.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn records<R: Read, const N: usize>(reader: R, header: [&str; N]) -> Result<Vec<(u64, [f64; N])>, ParseError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    let mut first = true;
    for result in rdr.records() {
        let record = result.map_err(|e| ParseError {
            line: e.position().map_or(0, |p| p.line()),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if std::mem::take(&mut first) && record.iter().eq(header.iter().copied()) {
            continue;
        }
        if record.len() != N {
            return Err(ParseError {
                line,
                column: record.len().min(N) + 1,
                message: format!("expected {N} fields ({}), found {}", header.join(","), record.len()),
            });
        }
        let mut values = [0.0; N];
        for (j, (field, slot)) in record.iter().zip(values.iter_mut()).enumerate() {
            *slot = match field.parse::<f64>() {
                Ok(x) if x.is_finite() => x,
                _ => {
                    return Err(ParseError {
                        line,
                        column: j + 1,
                        message: format!("field `{}` is not a finite number: {field:?}", header[j]),
                    })
                }
            };
        }
        out.push((line, values));
    }
    Ok(out)
}

pub fn read_pairs<R: Read>(reader: R) -> Result<Vec<WeightedPair>, ParseError> {
    records(reader, PAIR_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            if r[6] <= 0.0 {
                return Err(ParseError {
                    line,
                    column: 7,
                    message: format!("weight must be positive, got {}", r[6]),
                });
            }
            Ok(WeightedPair::new([r[0], r[1], r[2]], [r[3], r[4], r[5]], r[6]))
        })
        .collect()
}

pub fn read_priors<R: Read>(reader: R) -> Result<Vec<RotorMeasurement>, ParseError> {
    records(reader, PRIOR_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            if r[0] <= 0.0 {
                return Err(ParseError {
                    line,
                    column: 1,
                    message: format!("weight must be positive, got {}", r[0]),
                });
            }
            let s = Rotor::new(r[1], [r[2], r[3], r[4]]).map_err(|e| ParseError {
                line,
                column: 2,
                message: e.to_string(),
            })?;
            Ok(RotorMeasurement { s, w: r[0] })
        })
        .collect()
}

pub fn write_pairs<W: Write>(mut out: W, pairs: &[WeightedPair]) -> std::io::Result<()> {
    writeln!(out, "{}", PAIR_HEADER.join(","))?;
    for p in pairs {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.u[0], p.u[1], p.u[2], p.v[0], p.v[1], p.v[2], p.w
        )?;
    }
    Ok(())
}

pub fn write_priors<W: Write>(mut out: W, priors: &[RotorMeasurement]) -> std::io::Result<()> {
    writeln!(out, "{}", PRIOR_HEADER.join(","))?;
    for m in priors {
        let [a, c1, c2, c3] = m.s.to_array();
        writeln!(out, "{},{a},{c1},{c2},{c3}", m.w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_with_header_comments_and_blanks() {
        let text = "# pairs\nux,uy,uz,vx,vy,vz,w\n1,0,0,1,0,0,1\n\n# mid\n 0, 1,0,0,1,0,2.5\n";
        let pairs = read_pairs(text.as_bytes()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].u, [0.0, 1.0, 0.0]);
        assert_eq!(pairs[1].w, 2.5);
    }

    #[test]
    fn header_is_optional() {
        let pairs = read_pairs("1,2,3,4,5,6,7\n".as_bytes()).unwrap();
        assert_eq!(pairs[0].v, [4.0, 5.0, 6.0]);
    }

    #[test]
    fn arity_error_names_line() {
        let err = read_pairs("1,2,3\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 4));
        let err = read_pairs("ux,uy,uz,vx,vy,vz,w\n1,1,1,1,1,1,1\n1,2,3,4,5,6,7,8\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (3, 8));
    }

    #[test]
    fn field_errors() {
        let err = read_pairs("1,2,x,4,5,6,1\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        let err = read_pairs("1,2,3,4,5,6,0\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        let err = read_pairs("1,2,3,4,5,inf,1\n".as_bytes()).unwrap_err();
        assert_eq!(err.column, 6);
        let err = read_pairs("a,b,c,d,e,f,g\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn priors_renormalize_or_reject() {
        let ok = read_priors("w,a,c1,c2,c3\n2,1.0000001,0,0,0\n".as_bytes()).unwrap();
        assert_eq!(ok[0].s, Rotor::IDENTITY);
        assert_eq!(ok[0].w, 2.0);
        let err = read_priors("1,0.5,0,0,0\n".as_bytes()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 2));
        let err = read_priors("-1,1,0,0,0\n".as_bytes()).unwrap_err();
        assert_eq!(err.column, 1);
    }

    #[test]
    fn write_read_is_exact() {
        let pairs = vec![
            WeightedPair::new([0.1, -1.0 / 3.0, 1e-300], [std::f64::consts::PI, 2.0, -0.0], 0.7),
            WeightedPair::new([1e20, 5e-324, 1.0], [0.0, 0.0, 0.0], 1.0),
        ];
        let mut buf = Vec::new();
        write_pairs(&mut buf, &pairs).unwrap();
        assert_eq!(read_pairs(buf.as_slice()).unwrap(), pairs);
    }
}
