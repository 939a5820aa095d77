//! SVG tour plots: cities as filled circles, the tour as one closed
//! polyline, scaled into an 800x800 viewport with the aspect ratio kept.

use crate::domain::{tour_cost, Instance, MetricMode, Tour};
use crate::error::Result;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const CITY_RADIUS: f64 = 4.0;

/// Render `tour` over `instance` as a standalone SVG document.
/// Output bytes are deterministic for a given input.
pub fn render(instance: &Instance, tour: &Tour, mode: MetricMode) -> Result<String> {
    let cost = tour_cost(instance, tour, mode)?;

    let xs = instance.coords().iter().map(|c| c.0);
    let ys = instance.coords().iter().map(|c| c.1);
    let min_x = xs.clone().fold(f64::INFINITY, f64::min);
    let max_x = xs.fold(f64::NEG_INFINITY, f64::max);
    let min_y = ys.clone().fold(f64::INFINITY, f64::min);
    let max_y = ys.fold(f64::NEG_INFINITY, f64::max);
    let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;

    // y is flipped into screen coordinates so the plot keeps map orientation
    let project = |(x, y): (f64, f64)| {
        let px = MARGIN + (x - min_x) * scale;
        let py = SIZE - MARGIN - (y - min_y) * scale;
        (px, py)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    svg.push_str("<!-- y axis flipped: screen coordinates grow downward -->\n");
    svg.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">{} — cost {:.3} ({})</text>\n",
        instance.name(),
        cost,
        mode
    ));

    let mut path = String::new();
    for (k, &city) in tour.order().iter().enumerate() {
        let (px, py) = project(instance.coords()[city]);
        let op = if k == 0 { 'M' } else { 'L' };
        path.push_str(&format!("{op} {px:.2} {py:.2} "));
    }
    path.push('Z');
    svg.push_str(&format!(
        "<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
    ));

    for &(x, y) in instance.coords() {
        let (px, py) = project((x, y));
        svg.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"{CITY_RADIUS}\" fill=\"crimson\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_three_circles_and_one_path() {
        let inst =
            Instance::new("tri", vec![(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)]).unwrap();
        let tour = Tour::new(vec![0, 1, 2]).unwrap();
        let svg = render(&inst, &tour, MetricMode::RealEuclidean).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("Z\""));
        assert!(svg.contains("tri"));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let inst = Instance::new("tri", vec![(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)]).unwrap();
        let tour = Tour::new(vec![0, 1, 2, 3]).unwrap();
        assert!(render(&inst, &tour, MetricMode::RealEuclidean).is_err());
    }

    #[test]
    fn deterministic_bytes() {
        let inst = Instance::new("tri", vec![(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)]).unwrap();
        let tour = Tour::new(vec![0, 2, 1]).unwrap();
        let a = render(&inst, &tour, MetricMode::RealEuclidean).unwrap();
        let b = render(&inst, &tour, MetricMode::RealEuclidean).unwrap();
        assert_eq!(a, b);
    }
}
