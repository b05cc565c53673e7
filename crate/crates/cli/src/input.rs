use std::io::Read;
use std::path::Path;

/// Reads one number per line or per CSV cell. A non-numeric first line is
/// taken as a header and skipped.
pub fn read_sample(path: &Path) -> Result<Vec<f64>, String> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading stdin: {e}"))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {e}", path.display()))?;
    }
    parse_sample(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_sample(text: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    let mut seen_data = false;
    for (k, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|c| !c.is_empty())
            .collect();
        if cells.is_empty() {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = cells
            .iter()
            .map(|c| c.trim_matches('"').parse::<f64>())
            .collect();
        match parsed {
            Ok(v) => {
                values.extend(v);
                seen_data = true;
            }
            Err(_) if !seen_data => continue,
            Err(e) => return Err(format!("line {}: {e}", k + 1)),
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_lines_cells_and_a_header() {
        assert_eq!(
            parse_sample("x\n1\n2.5\n\n3e1\n").unwrap(),
            vec![1.0, 2.5, 30.0]
        );
        assert_eq!(parse_sample("1,2;3 4\n").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(parse_sample("1\nabc\n").unwrap_err().starts_with("line 2"));
    }
}
