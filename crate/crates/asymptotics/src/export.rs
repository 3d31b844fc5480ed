//! Plot-data CSV emission: one file per estimator kind, columns
//! `n,abscissa,value`, deterministic formatting.

use crate::estimators::EstimatorSeries;
use crate::fits::ParameterTrack;
use std::io::Write;
use std::path::Path;

const CSV_DIGITS: usize = 20;

pub fn write_estimator_csv(series: &EstimatorSeries, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    let path = dir.join(format!("{}.csv", series.kind.label()));
    let prec = series.values.first().map(|v| v.prec()).unwrap_or(64);
    let mut out = String::from("n,abscissa,value\n");
    for (i, v) in series.values.iter().enumerate() {
        let n = series.start_n + i;
        out.push_str(&format!(
            "{},{},{}\n",
            n,
            series.abscissa.value(n, prec).to_decimal(CSV_DIGITS),
            v.to_decimal(CSV_DIGITS)
        ));
    }
    atomic_write(&path, out.as_bytes())?;
    Ok(path)
}

pub fn write_track_csv(track: &ParameterTrack, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    let path = dir.join(format!("{}.csv", track.name));
    let prec = track.values.first().map(|v| v.prec()).unwrap_or(64);
    let mut out = String::from("n,abscissa,value\n");
    for (i, v) in track.values.iter().enumerate() {
        let n = track.start_n + i;
        out.push_str(&format!(
            "{},{},{}\n",
            n,
            track.abscissa.value(n, prec).to_decimal(CSV_DIGITS),
            v.to_decimal(CSV_DIGITS)
        ));
    }
    atomic_write(&path, out.as_bytes())?;
    Ok(path)
}

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::ratios;
    use crate::PrecSeries;
    use num_bigint::BigInt;

    #[test]
    fn csv_shape_and_determinism() {
        let coeffs: Vec<BigInt> = (1..=8u64).map(|n| BigInt::from(n * n)).collect();
        let series = PrecSeries::from_bigints(&coeffs, 40);
        let r = ratios(&series).unwrap();
        let dir = std::env::temp_dir().join("stacksort-csv-test");
        let p1 = write_estimator_csv(&r, &dir).unwrap();
        let first = std::fs::read_to_string(&p1).unwrap();
        let p2 = write_estimator_csv(&r, &dir).unwrap();
        let second = std::fs::read_to_string(&p2).unwrap();
        assert_eq!(first, second);
        assert!(first.starts_with("n,abscissa,value\n"));
        assert_eq!(first.lines().count(), 8); // header + 7 ratios
        let row = first.lines().nth(1).unwrap();
        assert!(row.starts_with("2,"));
    }
}
