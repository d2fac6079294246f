//! CSV writers for traces, widths and bound reports.
//!
//! Floats use Rust's shortest round-trip formatting, so identical runs give
//! byte-identical files and every value parses back to the same `f64`.

use std::io::Write;

use crate::bounds::BoundReport;
use crate::greedy::GreedyTrace;
use crate::widths::WidthSequence;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_sigmas<W: Write>(out: W, sigmas: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "sigma_n"])?;
    for (n, s) in sigmas.iter().enumerate() {
        w.write_record([n.to_string(), fmt_f64(*s)])?;
    }
    w.flush()?;
    Ok(())
}

/// Lower triangle of `A`, row by row.
pub fn write_matrix<W: Write>(out: W, a: &[Vec<f64>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "a_ij"])?;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate().take(i + 1) {
            w.write_record([i.to_string(), j.to_string(), fmt_f64(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_matrix<W: Write>(out: W, trace: &GreedyTrace) -> csv::Result<()> {
    write_matrix(out, &trace.a)
}

pub fn write_widths<W: Write>(out: W, widths: &WidthSequence) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "value", "tag", "method"])?;
    for e in &widths.entries {
        w.write_record([e.n.to_string(), fmt_f64(e.value), e.tag.to_string(), e.method.clone()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bounds<W: Write>(out: W, reports: &[BoundReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "name", "N", "K", "m", "gamma", "lhs_log", "rhs_log", "slack_log", "pass", "notes",
    ])?;
    for r in reports {
        let mut notes = r.notes.clone();
        if r.exploratory {
            notes = if notes.is_empty() {
                "exploratory".into()
            } else {
                format!("exploratory; {notes}")
            };
        }
        w.write_record([
            r.name.clone(),
            opt(r.n),
            opt(r.k),
            opt(r.m),
            fmt_f64(r.gamma),
            fmt_f64(r.lhs_log),
            fmt_f64(r.rhs_log),
            fmt_f64(r.slack_log()),
            r.verdict.to_string(),
            notes,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 2f64.powi(-40), 0.0, f64::NEG_INFINITY] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn sigmas_layout() {
        let mut buf = Vec::new();
        write_sigmas(&mut buf, &[1.0, 0.5, 0.0]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,sigma_n\n0,1.0\n1,0.5\n2,0.0\n");
    }

    #[test]
    fn matrix_layout() {
        let mut buf = Vec::new();
        write_matrix(&mut buf, &[vec![1.0, 0.0], vec![0.25, 0.5]]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "i,j,a_ij\n0,0,1.0\n1,0,0.25\n1,1,0.5\n"
        );
    }
}
