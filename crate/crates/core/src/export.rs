//! CSV and SVG writers.
//!
//! Numbers are written with Rust's shortest round-trip formatting so output is
//! byte-stable for identical inputs.

use std::fmt::Write as _;
use std::io::Write;

use crate::acm::AugmentedCovariance;
use crate::criteria::CriterionCurve;
use crate::error::{Error, Result};
use crate::geometry::Coarray;
use crate::harness::{DetectionStats, MethodStats};
use crate::scalar::Scalar;
use crate::spectral::{CorrelationVector, Periodogram};

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

/// Formats with negative zero folded into zero.
fn num<T: Scalar>(v: T) -> String {
    (v + T::zero()).to_string()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn rows<W: Write, I, R>(w: W, header: Option<&[&str]>, records: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = writer(w);
    if let Some(h) = header {
        out.write_record(h).map_err(csv_error)?;
    }
    for r in records {
        out.write_record(r).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `u,value`.
pub fn write_periodogram<T: Scalar, W: Write>(w: W, p: &Periodogram<T>) -> Result<()> {
    rows(
        w,
        Some(&["u", "value"]),
        p.grid
            .points()
            .iter()
            .zip(&p.values)
            .map(|(u, v)| [num(*u), num(*v)]),
    )
}

/// Columns `k,re,im` for every lag of the contiguous segment.
pub fn write_correlation<T: Scalar, W: Write>(w: W, r: &CorrelationVector<T>) -> Result<()> {
    rows(
        w,
        Some(&["k", "re", "im"]),
        r.lags().map(|k| {
            let z = r.get(k);
            [k.to_string(), num(z.re), num(z.im)]
        }),
    )
}

/// One line per matrix row, real and imaginary parts interleaved.
pub fn write_acm<T: Scalar, W: Write>(w: W, acm: &AugmentedCovariance<T>) -> Result<()> {
    let m = &acm.matrix;
    rows(
        w,
        None,
        (0..m.dim()).map(|i| {
            m.row(i)
                .iter()
                .flat_map(|z| [num(z.re), num(z.im)])
                .collect::<Vec<_>>()
        }),
    )
}

/// Columns `q,value,is_argmin`.
pub fn write_curve<T: Scalar, W: Write>(w: W, curve: &CriterionCurve<T>) -> Result<()> {
    rows(
        w,
        Some(&["q", "value", "is_argmin"]),
        curve
            .points()
            .map(|(q, v)| [q.to_string(), num(v), (q == curve.argmin).to_string()]),
    )
}

/// Columns `k,weight` for every lag with at least one sensor pair.
pub fn write_coarray<W: Write>(w: W, coarray: &Coarray) -> Result<()> {
    rows(
        w,
        Some(&["k", "weight"]),
        coarray.weights().map(|(k, n)| [k.to_string(), n.to_string()]),
    )
}

/// Columns `grid_value,p_detect,ci_lo,ci_hi,trials`.
pub fn write_detection<W: Write>(w: W, stats: &MethodStats) -> Result<()> {
    rows(
        w,
        Some(&["grid_value", "p_detect", "ci_lo", "ci_hi", "trials"]),
        stats.points.iter().map(|p| {
            [
                num(p.grid_value),
                num(p.p_detect),
                num(p.ci_lo),
                num(p.ci_hi),
                p.trials.to_string(),
            ]
        }),
    )
}

const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf",
];

fn dash(strategy: crate::pipeline::Strategy) -> &'static str {
    match strategy {
        crate::pipeline::Strategy::Ap => "",
        crate::pipeline::Strategy::Iss => " stroke-dasharray=\"6 4\"",
        crate::pipeline::Strategy::Nb => " stroke-dasharray=\"2 3\"",
    }
}

/// Detection probability versus the swept parameter, one line per method.
pub fn detection_svg(stats: &DetectionStats) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 170.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 50.0;
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;

    let xs: Vec<f64> = stats
        .methods
        .first()
        .map(|m| m.points.iter().map(|p| p.grid_value).collect())
        .unwrap_or_default();
    let (x0, x1) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a - 0.5, a + 0.5),
        _ => (0.0, 1.0),
    };
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - y) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{} (D = {})</text>",
        LEFT + pw / 2.0,
        stats.sweep,
        stats.true_count
    );
    for i in 0..=5 {
        let y = i as f64 / 5.0;
        let py = sy(y);
        let _ = writeln!(
            s,
            "<line x1=\"{LEFT}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ddd\"/>",
            LEFT + pw
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{y:.1}</text>",
            LEFT - 6.0,
            py + 4.0
        );
    }
    let ticks = if xs.len() <= 11 {
        xs.clone()
    } else {
        (0..=5).map(|i| x0 + (x1 - x0) * i as f64 / 5.0).collect()
    };
    for x in ticks {
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            sx(x),
            TOP + ph + 18.0,
            (x * 1000.0).round() / 1000.0
        );
    }
    let _ = writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        H - 10.0,
        stats.parameter
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">detection probability</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, m) in stats.methods.iter().enumerate() {
        let colour = PALETTE[(m.method.criterion as usize) % PALETTE.len()];
        let points: Vec<String> = m
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.grid_value), sy(p.p_detect)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\"{} points=\"{}\"/>",
            dash(m.method.strategy),
            points.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{colour}\" stroke-width=\"2\"{}/>",
            lx + 28.0,
            dash(m.method.strategy)
        );
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", lx + 34.0, ly + 4.0, m.method);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{mdlgap, CriterionKind};
    use crate::harness::{DetectionPoint, Method, SweepParameter};
    use crate::pipeline::Strategy;
    use crate::spectral::white_correlation;
    use crate::{acm::lra_acm, EigSpectrum, UGrid};

    fn text(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn periodogram_and_correlation() {
        let p = Periodogram {
            grid: UGrid::<f64>::new(4).unwrap(),
            values: vec![1.0, 2.5, 0.0, 3.0],
        };
        assert_eq!(text(|b| write_periodogram(b, &p)), "u,value\n-1,1\n-0.5,2.5\n0,0\n0.5,3\n");
        let r = white_correlation(2, 2.0f64);
        assert_eq!(text(|b| write_correlation(b, &r)), "k,re,im\n-1,0,0\n0,2,0\n1,0,0\n");
    }

    #[test]
    fn acm_rows() {
        let acm = lra_acm(&white_correlation(2, 1.0f64));
        assert_eq!(text(|b| write_acm(b, &acm)), "1,0,0,0\n0,0,1,0\n");
    }

    #[test]
    fn curve_marks_argmin() {
        let spec = EigSpectrum::from_values(&[5.0f64, 4.0, 1.0, 1.0], 100).unwrap();
        let curve = mdlgap(&spec).unwrap();
        let out = text(|b| write_curve(b, &curve));
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "q,value,is_argmin");
        assert_eq!(lines.len(), 1 + curve.values.len());
        assert_eq!(lines.iter().filter(|l| l.ends_with(",true")).count(), 1);
        assert!(lines[curve.argmin - curve.q_min + 1].ends_with(",true"));
    }

    #[test]
    fn detection_csv_and_svg() {
        let stats = DetectionStats {
            sweep: "demo".into(),
            parameter: SweepParameter::Snapshots,
            true_count: 2,
            methods: vec![MethodStats {
                method: Method::new(Strategy::Iss, CriterionKind::Sorte),
                points: vec![DetectionPoint::new(1.0, 0, 4), DetectionPoint::new(2.0, 4, 4)],
            }],
        };
        let out = text(|b| write_detection(b, &stats.methods[0]));
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("grid_value,p_detect,ci_lo,ci_hi,trials"));
        assert!(lines.next().unwrap().starts_with("1,0,0,"));
        assert!(lines.next().unwrap().starts_with("2,1,"));
        let svg = detection_svg(&stats);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("ISS+SORTE"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
