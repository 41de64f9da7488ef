//! Delimited-text datasets: one observation per line, or one column of a
//! comma/tab/whitespace-separated table. Blank lines and `#` comments are
//! skipped; numbers always use `.` as the decimal separator.

use crate::error::{Error, Result};

/// Parses the values in `column` (0-based) of every data line.
pub fn parse_dataset(text: &str, column: usize) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let field = l
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .nth(column)
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("no column {} in '{l}'", column + 1),
            })?;
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("'{field}' is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("'{field}' is not finite"),
            });
        }
        values.push(v);
    }
    if values.len() < 2 {
        return Err(Error::EmptyOrSingleton { len: values.len() });
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_columns_and_comments() {
        let text = "# header\n1.5\n\n  2.25 # trailing\n-3e-2\n";
        assert_eq!(parse_dataset(text, 0).unwrap(), vec![1.5, 2.25, -0.03]);
        let table = "a,b\n";
        assert!(matches!(parse_dataset(table, 0), Err(Error::Parse { line: 1, .. })));
        let table = "1,10\n2\t20\n3 30\n";
        assert_eq!(parse_dataset(table, 1).unwrap(), vec![10.0, 20.0, 30.0]);
    }

    #[test]
    fn reports_offending_line() {
        let err = parse_dataset("0.1\n0.2\nabc\n", 0).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "'abc' is not a number".into()
            }
        );
        assert!(matches!(parse_dataset("1\n2\n", 1), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dataset("1\nNaN\n", 0), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_dataset("1\n", 0), Err(Error::EmptyOrSingleton { len: 1 }));
    }
}
