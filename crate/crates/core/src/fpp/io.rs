use super::configuration::Configuration;
use crate::error::{Error, Result};
use std::io::{Read, Write};

/// `sample_id,count`.
pub fn write_counts<W: Write>(w: W, counts: &[u64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["sample_id", "count"])?;
    for (i, c) in counts.iter().enumerate() {
        out.write_record([i.to_string(), c.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_counts<R: Read>(r: R) -> Result<Vec<u64>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (row, rec) in rdr.deserialize::<(usize, u64)>().enumerate() {
        let (id, c) = rec?;
        if id != row {
            return Err(Error::Config(format!("sample_id {id} on row {row}")));
        }
        out.push(c);
    }
    Ok(out)
}

/// `sample_id,point_index,x1..xd`; empty configurations have no rows.
pub fn write_configurations<W: Write>(w: W, samples: &[Configuration], dim: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["sample_id".to_string(), "point_index".to_string()];
    header.extend((1..=dim).map(|i| format!("x{i}")));
    out.write_record(&header)?;
    for (s, g) in samples.iter().enumerate() {
        for (j, p) in g.points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidParameter(format!("point of dimension {} in a {dim}-dimensional dump", p.len())));
            }
            let mut rec = vec![s.to_string(), j.to_string()];
            rec.extend(p.iter().map(|x| format!("{x:?}")));
            out.write_record(&rec)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_configurations`]; `n_samples` restores trailing empty
/// configurations.
pub fn read_configurations<R: Read>(r: R, n_samples: Option<usize>) -> Result<Vec<Configuration>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out: Vec<Configuration> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::Config(format!("short record {rec:?}")));
        let s: usize = field(0)?.parse().map_err(|e| Error::Config(format!("sample_id: {e}")))?;
        let p: Vec<f64> = (2..rec.len())
            .map(|i| field(i)?.parse::<f64>().map_err(|e| Error::Config(format!("coordinate: {e}"))))
            .collect::<Result<_>>()?;
        if out.len() <= s {
            out.resize(s + 1, Configuration::default());
        }
        out[s].points.push(p);
    }
    if let Some(n) = n_samples {
        if out.len() > n {
            return Err(Error::Config(format!("{} samples in file, expected {n}", out.len())));
        }
        out.resize(n, Configuration::default());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_round_trip() {
        let mut buf = Vec::new();
        write_counts(&mut buf, &[3, 0, 7]).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "sample_id,count\n0,3\n1,0\n2,7\n");
        assert_eq!(read_counts(&buf[..]).unwrap(), vec![3, 0, 7]);
    }

    #[test]
    fn configurations_round_trip() {
        let g = vec![
            Configuration::new(vec![vec![0.1, 0.2], vec![0.3, 1.0 / 3.0]]),
            Configuration::default(),
            Configuration::new(vec![vec![0.5, 0.5]]),
            Configuration::default(),
        ];
        let mut buf = Vec::new();
        write_configurations(&mut buf, &g, 2).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sample_id,point_index,x1,x2\n0,0,0.1,0.2\n"));
        assert_eq!(read_configurations(&buf[..], Some(4)).unwrap(), g);
    }
}
