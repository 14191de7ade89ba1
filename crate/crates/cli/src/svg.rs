//! Minimal self-contained SVG line chart for bench reports: mean TWT per
//! method as a function of the job count. No external services or fonts.

use crate::bench::{BenchReport, Method};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 7] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f", "#17becf",
];

type Series<'a> = (&'a str, &'a str, Vec<(usize, f64)>);

pub fn mean_twt_chart(report: &BenchReport) -> String {
    let sizes: Vec<usize> = report.per_size.iter().map(|s| s.n_jobs).collect();
    let mut series: Vec<Series> = Vec::new();
    for (rank, method) in Method::ALL.iter().enumerate() {
        let points: Vec<(usize, f64)> = report
            .per_size
            .iter()
            .filter_map(|s| {
                s.per_method
                    .get(method.name())
                    .filter(|stats| stats.mean_twt.is_finite())
                    .map(|stats| (s.n_jobs, stats.mean_twt))
            })
            .collect();
        if !points.is_empty() {
            series.push((method.name(), COLORS[rank % COLORS.len()], points));
        }
    }

    let x_max = sizes.iter().copied().max().unwrap_or(1) as f64;
    let y_max = series
        .iter()
        .flat_map(|(_, _, pts)| pts.iter().map(|&(_, y)| y))
        .fold(1.0f64, f64::max);
    let x_pos = |x: f64| MARGIN + (WIDTH - 2.0 * MARGIN) * x / x_max;
    let y_pos = |y: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * y / y_max;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <text x=\"{xc}\" y=\"{below}\" font-size=\"14\" text-anchor=\"middle\">jobs</text>\n\
         <text x=\"16\" y=\"{yc}\" font-size=\"14\" transform=\"rotate(-90 16 {yc})\" \
         text-anchor=\"middle\">mean TWT</text>\n",
        y0 = HEIGHT - MARGIN,
        x1 = WIDTH - MARGIN,
        xc = WIDTH / 2.0,
        below = HEIGHT - MARGIN / 3.0,
        yc = HEIGHT / 2.0,
    );
    for &size in &sizes {
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{size}</text>\n",
            x_pos(size as f64),
            HEIGHT - MARGIN + 18.0,
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{y_max:.1}</text>\n",
        MARGIN - 6.0,
        MARGIN + 4.0,
    ));
    for (rank, (name, color, points)) in series.iter().enumerate() {
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", x_pos(x as f64), y_pos(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        let ly = MARGIN + 16.0 * rank as f64;
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{ly}\" x2=\"{x2}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" font-size=\"12\">{name}</text>\n",
            x = WIDTH - MARGIN - 110.0,
            x2 = WIDTH - MARGIN - 86.0,
            tx = WIDTH - MARGIN - 80.0,
            ty = ly + 4.0,
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
