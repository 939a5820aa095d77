//! TSPLIB readers for the EUC_2D subset plus the results CSV writer.
//!
//! Only `EDGE_WEIGHT_TYPE: EUC_2D` is accepted; anything else is rejected
//! loudly rather than silently mis-ranked. Keyword lines tolerate both
//! `KEY: value` and `KEY : value`, and any run of whitespace separates
//! coordinate fields.

use std::io::{BufRead, Write};

use crate::domain::{Instance, Tour};
use crate::engine::TrialStats;
use crate::error::{Error, Result};

fn split_keyword(line: &str) -> Option<(String, String)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim().to_uppercase(), value.trim().to_string()))
}

/// Parse a TSPLIB `.tsp` file with a `NODE_COORD_SECTION`.
///
/// TSPLIB nodes are 1-indexed; `coords[i]` holds node `i + 1`.
pub fn parse_tsp(reader: impl BufRead) -> Result<Instance> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut edge_weight_type: Option<String> = None;
    let mut in_coords = false;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut parsed = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !in_coords {
            if line.eq_ignore_ascii_case("NODE_COORD_SECTION") {
                let dim = dimension.ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "NODE_COORD_SECTION before DIMENSION".into(),
                })?;
                coords = vec![None; dim];
                in_coords = true;
            } else if let Some((key, value)) = split_keyword(line) {
                match key.as_str() {
                    "NAME" => name = value,
                    "DIMENSION" => {
                        dimension = Some(value.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            message: format!("bad DIMENSION value {value:?}"),
                        })?)
                    }
                    "EDGE_WEIGHT_TYPE" => edge_weight_type = Some(value),
                    _ => {} // TYPE, COMMENT, and friends are informational
                }
            } else {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unexpected line {line:?} in header"),
                });
            }
        } else {
            if line.eq_ignore_ascii_case("EOF") {
                break;
            }
            let mut fields = line.split_whitespace();
            let parse_err = |message: String| Error::Parse { line: lineno, message };
            let id: usize = fields
                .next()
                .ok_or_else(|| parse_err("empty coordinate line".into()))?
                .parse()
                .map_err(|_| parse_err(format!("bad node id in {line:?}")))?;
            let x: f64 = fields
                .next()
                .ok_or_else(|| parse_err(format!("missing x coordinate in {line:?}")))?
                .parse()
                .map_err(|_| parse_err(format!("bad x coordinate in {line:?}")))?;
            let y: f64 = fields
                .next()
                .ok_or_else(|| parse_err(format!("missing y coordinate in {line:?}")))?
                .parse()
                .map_err(|_| parse_err(format!("bad y coordinate in {line:?}")))?;
            if id == 0 || id > coords.len() {
                return Err(Error::Integrity(format!(
                    "node id {id} out of range 1..={}",
                    coords.len()
                )));
            }
            if coords[id - 1].is_some() {
                return Err(Error::Integrity(format!("node id {id} listed twice")));
            }
            coords[id - 1] = Some((x, y));
            parsed += 1;
        }
    }

    match edge_weight_type.as_deref() {
        Some("EUC_2D") => {}
        Some(other) => {
            return Err(Error::UnsupportedFormat(format!(
                "EDGE_WEIGHT_TYPE {other} is not supported, only EUC_2D"
            )))
        }
        None => {
            return Err(Error::UnsupportedFormat(
                "missing EDGE_WEIGHT_TYPE (only EUC_2D is supported)".into(),
            ))
        }
    }
    let dim = dimension.ok_or_else(|| Error::Integrity("missing DIMENSION".into()))?;
    if parsed != dim {
        return Err(Error::Integrity(format!(
            "DIMENSION says {dim} but {parsed} coordinate lines were found"
        )));
    }
    let coords = coords.into_iter().map(|c| c.expect("counted")).collect();
    Instance::new(name, coords)
}

/// Parse a TSPLIB `.tour` file against an instance of `n` cities.
/// Node ids are shifted to 0-based.
pub fn parse_opt_tour(reader: impl BufRead, n: usize) -> Result<Tour> {
    let mut in_tour = false;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut terminated = false;

    'outer: for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.eq_ignore_ascii_case("EOF") {
            continue;
        }
        if !in_tour {
            if line.eq_ignore_ascii_case("TOUR_SECTION") {
                in_tour = true;
            }
            continue;
        }
        for field in line.split_whitespace() {
            let id: i64 = field.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad node id {field:?}"),
            })?;
            if id == -1 {
                terminated = true;
                break 'outer;
            }
            if id < 1 || id as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "node id {id} out of range 1..={n}"
                )));
            }
            order.push(id as usize - 1);
        }
    }

    if !in_tour {
        return Err(Error::Integrity("missing TOUR_SECTION".into()));
    }
    if !terminated {
        return Err(Error::Integrity("TOUR_SECTION not terminated by -1".into()));
    }
    if order.len() != n {
        return Err(Error::Integrity(format!(
            "tour lists {} nodes but instance has {n}",
            order.len()
        )));
    }
    Tour::new(order)
}

/// Write a tour back out in TSPLIB `.tour` format (1-indexed, -1 terminated).
pub fn write_tour(mut w: impl Write, name: &str, tour: &Tour) -> Result<()> {
    writeln!(w, "NAME: {name}")?;
    writeln!(w, "TYPE: TOUR")?;
    writeln!(w, "DIMENSION: {}", tour.len())?;
    writeln!(w, "TOUR_SECTION")?;
    for &city in tour.order() {
        writeln!(w, "{}", city + 1)?;
    }
    writeln!(w, "-1")?;
    writeln!(w, "EOF")?;
    Ok(())
}

pub const CSV_HEADER: &str =
    "algorithm,instance,seed,budget,R,metric,best_cost,evaluations,wall_time_seconds";

/// Write per-trial results as CSV, one row per trial in input order.
pub fn write_results_csv(rows: &[TrialStats], mut w: impl Write) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Domain("refusing to write a CSV with no trial rows".into()));
    }
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            row.algorithm,
            row.instance,
            row.seed,
            row.budget,
            row.r,
            row.metric,
            row.best_cost,
            row.evaluations,
            row.wall_time_seconds
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MetricMode;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MINI_TSP: &str = "NAME: mini\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0.0 0.0\n2 3.0 0.0\n3 0.0 4.0\nEOF\n";

    #[test]
    fn parses_minimal_instance() {
        let inst = parse_tsp(MINI_TSP.as_bytes()).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.name(), "mini");
        assert_eq!(inst.coords(), &[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
    }

    #[test]
    fn dimension_mismatch_is_integrity_error() {
        let text = "DIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\n4 1 1\nEOF\n";
        assert!(matches!(parse_tsp(text.as_bytes()), Err(Error::Integrity(_))));
    }

    #[test]
    fn non_euc2d_rejected() {
        let text = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\n";
        assert!(matches!(parse_tsp(text.as_bytes()), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn malformed_coordinate_line_reports_line_number() {
        let text = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 oops 0\n3 0 1\n";
        match parse_tsp(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_tour_with_index_shift() {
        let t = parse_opt_tour("TOUR_SECTION\n1\n2\n3\n-1\n".as_bytes(), 3).unwrap();
        assert_eq!(t.order(), &[0, 1, 2]);
    }

    #[test]
    fn duplicate_tour_entry_rejected() {
        assert!(matches!(
            parse_opt_tour("TOUR_SECTION\n1\n1\n3\n-1\n".as_bytes(), 3),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn wrong_tour_count_rejected() {
        assert!(matches!(
            parse_opt_tour("TOUR_SECTION\n1\n2\n-1\n".as_bytes(), 3),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn berlin52_loads() {
        let inst = parse_tsp(&include_bytes!("../data/berlin52.tsp")[..]).unwrap();
        assert_eq!(inst.n(), 52);
        let tour = parse_opt_tour(&include_bytes!("../data/berlin52.opt.tour")[..], 52).unwrap();
        assert_eq!(tour.len(), 52);
        // Rounded-metric value of the distributed optimal tour, frozen from
        // direct evaluation of the file.
        let rounded = crate::domain::tour_cost(&inst, &tour, MetricMode::RoundedEuclidean).unwrap();
        assert_eq!(rounded, 7542.0);
    }

    #[test]
    fn csv_shape() {
        let row = TrialStats {
            algorithm: "chase_escape".into(),
            instance: "mini".into(),
            seed: 1,
            budget: 100,
            r: 3,
            metric: MetricMode::RealEuclidean,
            best_cost: 12.0,
            best_tour: Tour::new(vec![0, 1, 2]).unwrap(),
            evaluations: 100,
            catches: 4,
            wall_time_seconds: 0.01,
        };
        let mut buf = Vec::new();
        write_results_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("chase_escape,mini,1,100,3,real,12,"));
    }

    #[test]
    fn empty_csv_refused() {
        let mut buf = Vec::new();
        assert!(write_results_csv(&[], &mut buf).is_err());
    }

    proptest! {
        #[test]
        fn tour_roundtrip(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 3 + seed as usize % 40;
            let t = crate::domain::random_tour(n, &mut rng).unwrap();
            let mut buf = Vec::new();
            write_tour(&mut buf, "t", &t).unwrap();
            let back = parse_opt_tour(&buf[..], n).unwrap();
            prop_assert_eq!(t, back);
        }
    }
}
