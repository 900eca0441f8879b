//! CSV time-series ingestion and output.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::SampleSeries;
use crate::tol;

/// Reads column `column` against the `t` column of a CSV file.
///
/// Uniformly spaced timestamps (to [`tol::UNIFORM_SPACING_REL`]) give `dt`
/// directly. With `resample`, values are always linearly interpolated onto
/// `t_first + k * resample` for every grid point inside `[t_first, t_last]`;
/// irregular timestamps require it.
pub fn ingest_series(path: &Path, column: &str, resample: Option<f64>) -> Result<SampleSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(file, column, resample)
}

pub fn ingest_reader(reader: impl Read, column: &str, resample: Option<f64>) -> Result<SampleSeries> {
    let (t, v) = read_columns(reader, column)?;
    if t.len() < 2 {
        return Err(Error::Parse(format!(
            "need at least 2 samples to establish the spacing, got {}",
            t.len()
        )));
    }
    if let Some(row) = t.windows(2).position(|w| w[1] <= w[0]) {
        // data row i sits on line i + 2 of the file
        return Err(Error::NonMonotoneTime { row: row + 3 });
    }
    if let Some(step) = resample {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidSpacing(step));
        }
        return SampleSeries::new(interpolate(&t, &v, step), step);
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let uniform = t
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= tol::UNIFORM_SPACING_REL * dt);
    if !uniform {
        return Err(Error::IrregularSamplingWithoutResample);
    }
    SampleSeries::new(v, dt)
}

fn read_columns(reader: impl Read, column: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    };
    let t_idx = find("t")?;
    let v_idx = find(column)?;
    let mut t = Vec::new();
    let mut v = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = i + 2;
        t.push(parse_field(record.get(t_idx), row, "t")?);
        v.push(parse_field(record.get(v_idx), row, column)?);
    }
    Ok((t, v))
}

fn parse_field(field: Option<&str>, row: usize, name: &str) -> Result<f64> {
    let field = field.ok_or_else(|| Error::Parse(format!("row {row}: missing `{name}`")))?;
    let x: f64 = field
        .parse()
        .map_err(|_| Error::Parse(format!("row {row}: `{field}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Parse(format!("row {row}: `{name}` is not finite")));
    }
    Ok(x)
}

fn interpolate(t: &[f64], v: &[f64], step: f64) -> Vec<f64> {
    let span = t[t.len() - 1] - t[0];
    let count = (span / step * (1.0 + 1e-12)).floor() as usize + 1;
    let mut seg = 0;
    (0..count)
        .map(|k| {
            let at = t[0] + k as f64 * step;
            while seg + 2 < t.len() && t[seg + 1] <= at {
                seg += 1;
            }
            let (t0, t1) = (t[seg], t[seg + 1]);
            let w = ((at - t0) / (t1 - t0)).clamp(0.0, 1.0);
            v[seg] + w * (v[seg + 1] - v[seg])
        })
        .collect()
}

/// Writes `t,<column>` rows with `t = k * dt`, using shortest round-trip
/// formatting.
pub fn series_to_csv(x: &SampleSeries, column: &str) -> String {
    let mut out = format!("t,{column}\n");
    for (k, v) in x.values().iter().enumerate() {
        let _ = writeln!(out, "{},{v}", k as f64 * x.dt());
    }
    out
}

/// Forward differences divided by `dt`: a cumulative quantity becomes a rate.
///
/// With `p = 1`, the window mean of the rates over samples `j..j+n` equals
/// the average rate `(x[j+n] - x[j]) / (n * dt)`.
pub fn derive_rates(x: &SampleSeries) -> Result<SampleSeries> {
    if x.len() < 2 {
        return Err(Error::TooShort(x.len()));
    }
    let dt = x.dt();
    let rates = x.values().windows(2).map(|w| (w[1] - w[0]) / dt).collect();
    SampleSeries::new(rates, dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(text: &str, resample: Option<f64>) -> Result<SampleSeries> {
        ingest_reader(text.as_bytes(), "value", resample)
    }

    #[test]
    fn uniform_file() {
        let x = ingest("t,value\n0,1\n1,0\n2,0\n3,1\n", None).unwrap();
        assert_eq!(x.values(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(x.dt(), 1.0);
    }

    #[test]
    fn resample_interpolates() {
        let x = ingest("t,value\n0,0\n2,2\n", Some(1.0)).unwrap();
        assert_eq!(x.values(), &[0.0, 1.0, 2.0]);
        assert_eq!(x.dt(), 1.0);
    }

    #[test]
    fn irregular_needs_resample() {
        let text = "t,value\n0,0\n1,1\n3,3\n";
        assert!(matches!(
            ingest(text, None),
            Err(Error::IrregularSamplingWithoutResample)
        ));
        let x = ingest(text, Some(0.5)).unwrap();
        assert_eq!(x.values(), &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn single_row_is_a_parse_error() {
        assert!(matches!(ingest("t,value\n0,1\n", None), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            ingest("t,value\n0,1\n0,2\n", None),
            Err(Error::NonMonotoneTime { row: 3 })
        ));
        assert!(matches!(
            ingest("t,value\n1,1\n0,2\n", None),
            Err(Error::NonMonotoneTime { .. })
        ));
        assert!(matches!(ingest("t,other\n0,1\n1,2\n", None), Err(Error::Parse(_))));
        assert!(matches!(ingest("time,value\n0,1\n1,2\n", None), Err(Error::Parse(_))));
        assert!(matches!(ingest("t,value\n0,1\n1,x\n", None), Err(Error::Parse(_))));
        assert!(matches!(
            ingest("t,value\n0,1\n1,2\n", Some(0.0)),
            Err(Error::InvalidSpacing(_))
        ));
    }

    #[test]
    fn extra_columns_are_ignored() {
        let x = ingest_reader("speed,t,dist\n5,0,0\n6,0.5,3\n7,1,4\n".as_bytes(), "dist", None).unwrap();
        assert_eq!(x.values(), &[0.0, 3.0, 4.0]);
        assert_eq!(x.dt(), 0.5);
    }

    #[test]
    fn rates_examples() {
        let r = derive_rates(&SampleSeries::from_values(vec![0.0, 1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(r.values(), &[1.0, 1.0, 1.0]);
        let r = derive_rates(&SampleSeries::from_values(vec![0.0, 0.0, 5.0]).unwrap()).unwrap();
        assert_eq!(r.values(), &[0.0, 5.0]);
        let r = derive_rates(&SampleSeries::new(vec![0.0, 2.0, 2.0, 8.0], 2.0).unwrap()).unwrap();
        assert_eq!(r.values(), &[1.0, 0.0, 3.0]);
        assert_eq!(r.dt(), 2.0);
        assert!(matches!(
            derive_rates(&SampleSeries::from_values(vec![1.0]).unwrap()),
            Err(Error::TooShort(1))
        ));
    }

    #[test]
    fn window_mean_of_rates_is_average_rate() {
        let cumulative = SampleSeries::new(vec![0.0, 1.5, 4.0, 4.5, 9.0, 12.25, 13.0], 0.5).unwrap();
        let rates = derive_rates(&cumulative).unwrap();
        let c = cumulative.values();
        for n in 1..rates.len() {
            for j in 0..=rates.len() - n {
                let mean = crate::discrete::window_mean_pow(&rates, j, n, 1.0).unwrap();
                let avg = (c[j + n] - c[j]) / (n as f64 * 0.5);
                // Rates can be negative in general; these are not, so |r| = r.
                assert!((mean - avg).abs() <= 1e-12 * avg.abs().max(1.0), "j={j} n={n}");
            }
        }
    }
}
