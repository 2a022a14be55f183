//! Value lists on the command line: `0.1`, `0.1,0.2,0.5` or `a..b[:step]`
//! (inclusive, default step 0.1).

const DEFAULT_STEP: f64 = 0.1;

pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (b, num(step)?),
            None => (rest, DEFAULT_STEP),
        };
        let (a, b) = (num(a)?, num(b)?);
        if !(step > 0.0) {
            return Err(format!("step must be positive in '{s}'"));
        }
        if b < a {
            return Err(format!("empty range '{s}'"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        // rounding keeps 0.1 + 2 * 0.1 printing as 0.3
        return Ok((0..=n)
            .map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    s.split(',').map(num).collect()
}

fn num(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{}' is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{}' is not finite", s.trim()))
    }
}
