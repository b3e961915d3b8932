//! Parameter grids given as `start:stop:step` or comma-separated lists.

fn number<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("cannot parse \"{s}\" as a number"))
}

/// Real grid; `start:stop:step` includes `stop` when it lies on the grid.
pub fn real_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h): (f64, f64, f64) = (number(start)?, number(stop)?, number(step)?);
            if !(h > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
                return Err(format!("invalid range \"{text}\""));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=count)
                .map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12)
                .collect())
        }
        [_] => text.split(',').map(number).collect(),
        _ => Err(format!("invalid grid \"{text}\"")),
    }
}

/// Integer grid; `start:stop` or `start:stop:step`, inclusive.
pub fn int_grid(text: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let (a, b, h) = match parts.as_slice() {
        [start, stop] => (number(start)?, number(stop)?, 1),
        [start, stop, step] => (number(start)?, number(stop)?, number(step)?),
        [_] => return text.split(',').map(number).collect(),
        _ => return Err(format!("invalid grid \"{text}\"")),
    };
    if h == 0 || b < a {
        return Err(format!("invalid range \"{text}\""));
    }
    Ok((a..=b).step_by(h).collect())
}
