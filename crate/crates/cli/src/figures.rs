use crate::output::{num, write_csv};
use bridge_stopping::thresholds::{b_star_equation, d_star_equation, ProblemSpec, ThresholdSet};
use bridge_stopping::values::{j_scalar, v_scalar, w_scalar, Candidate, SpacePoint};
use bridge_stopping::Error;
use std::path::{Path, PathBuf};

type Res<T> = Result<T, Error>;

const ODD_POWERS: [u32; 4] = [0, 1, 2, 3];
const ABS_POWERS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

/// One figure's curves sampled on a common abscissa; `None` leaves the
/// cell empty.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn new(abscissa: &str, curves: impl IntoIterator<Item = String>) -> Self {
        let mut header = vec![abscissa.to_string()];
        header.extend(curves);
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn write(&self, path: &Path) -> Res<()> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.map(num).unwrap_or_default()).collect())
            .collect();
        write_csv(path, &self.header, &rows)
    }
}

struct Marker {
    figure: u8,
    curve: String,
    marker: &'static str,
    x: f64,
    y: f64,
}

fn linspace(lo: f64, hi: f64, intervals: usize) -> impl Iterator<Item = f64> {
    (0..=intervals).map(move |i| {
        if i == intervals {
            hi
        } else {
            lo + (hi - lo) * i as f64 / intervals as f64
        }
    })
}

fn solve(p: ProblemSpec) -> Res<ThresholdSet> {
    ThresholdSet::solve(p)
}

fn half_excess(q: f64) -> f64 {
    (0.5 * (q - 1.0)).max(0.0).sqrt()
}

fn figure1(markers: &mut Vec<Marker>) -> Res<Table> {
    let mut t = Table::new("B", ODD_POWERS.iter().map(|n| format!("n={n}")));
    for b in linspace(0.0, 3.0, 600) {
        let mut row = vec![Some(b)];
        for &n in &ODD_POWERS {
            row.push(Some(b_star_equation(n, b)?));
        }
        t.rows.push(row);
    }
    for &n in &ODD_POWERS {
        let b = solve(ProblemSpec::problem2(n))?.b()?;
        let root_n = (n as f64).sqrt();
        let curve = format!("n={n}");
        markers.push(Marker {
            figure: 1,
            curve: curve.clone(),
            marker: "B_star",
            x: b,
            y: b_star_equation(n, b)?,
        });
        markers.push(Marker {
            figure: 1,
            curve,
            marker: "sqrt_n",
            x: root_n,
            y: b_star_equation(n, root_n)?,
        });
    }
    Ok(t)
}

fn figure2(markers: &mut Vec<Marker>) -> Res<Table> {
    let mut t = Table::new("D", ABS_POWERS.iter().map(|q| format!("q={q}")));
    for d in linspace(0.0, 3.0, 600) {
        let mut row = vec![Some(d)];
        for &q in &ABS_POWERS {
            row.push(Some(d_star_equation(q, d)?));
        }
        t.rows.push(row);
    }
    for &q in &ABS_POWERS {
        let d = solve(ProblemSpec::problem3(q)?)?.d()?;
        let curve = format!("q={q}");
        let low = half_excess(q);
        markers.push(Marker {
            figure: 2,
            curve: curve.clone(),
            marker: "D_star",
            x: d,
            y: d_star_equation(q, d)?,
        });
        markers.push(Marker {
            figure: 2,
            curve,
            marker: "sqrt_half_q_minus_1",
            x: low,
            y: d_star_equation(q, low)?,
        });
    }
    Ok(t)
}

fn figure3(markers: &mut Vec<Marker>) -> Res<Table> {
    let set = solve(ProblemSpec::problem1())?;
    let (b, c) = (set.b()?, set.c()?);
    let mut t = Table::new("C", ["v".to_string()]);
    t.rows = linspace(-5.0, b, 1000)
        .map(|x| vec![Some(x), Some(v_scalar(x, b))])
        .collect();
    markers.push(Marker {
        figure: 3,
        curve: "v".into(),
        marker: "C_star",
        x: c,
        y: v_scalar(c, b),
    });
    markers.push(Marker {
        figure: 3,
        curve: "v".into(),
        marker: "B_star",
        x: b,
        y: v_scalar(b, b),
    });
    Ok(t)
}

fn figure4(markers: &mut Vec<Marker>) -> Res<Table> {
    let bs = ODD_POWERS
        .iter()
        .map(|&n| solve(ProblemSpec::problem2(n))?.b())
        .collect::<Res<Vec<_>>>()?;
    let mut t = Table::new("D", ODD_POWERS.iter().map(|n| format!("n={n}")));
    for d in linspace(0.0, 4.0, 800) {
        let mut row = vec![Some(d)];
        for (&n, &b) in ODD_POWERS.iter().zip(&bs) {
            row.push(Some(j_scalar(n, d, b)?));
        }
        t.rows.push(row);
    }
    for (&n, &b) in ODD_POWERS.iter().zip(&bs) {
        let curve = format!("n={n}");
        let root_n = (n as f64).sqrt();
        markers.push(Marker {
            figure: 4,
            curve: curve.clone(),
            marker: "B_star",
            x: b,
            y: j_scalar(n, b, b)?,
        });
        markers.push(Marker {
            figure: 4,
            curve,
            marker: "sqrt_n",
            x: root_n,
            y: j_scalar(n, root_n, b)?,
        });
    }
    Ok(t)
}

/// Each `w` lives on its own `[0, D*]`; the abscissa is the union of the
/// per-curve grids so every curve ends exactly at `D*`.
fn figure5(markers: &mut Vec<Marker>) -> Res<Table> {
    let sets = ABS_POWERS
        .iter()
        .map(|&q| solve(ProblemSpec::problem3(q)?))
        .collect::<Res<Vec<_>>>()?;
    let ds = sets.iter().map(|s| s.d()).collect::<Res<Vec<_>>>()?;
    let mut xs: Vec<f64> = ds.iter().flat_map(|&d| linspace(0.0, d, 400)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut t = Table::new("A", ABS_POWERS.iter().map(|q| format!("q={q}")));
    for a in xs {
        let mut row = vec![Some(a)];
        for (&q, &d) in ABS_POWERS.iter().zip(&ds) {
            row.push(if a <= d { Some(w_scalar(q, a, d)?) } else { None });
        }
        t.rows.push(row);
    }
    for ((&q, &d), set) in ABS_POWERS.iter().zip(&ds).zip(&sets) {
        let curve = format!("q={q}");
        let a = set.a()?;
        let low = half_excess(q);
        markers.push(Marker {
            figure: 5,
            curve: curve.clone(),
            marker: "A_star",
            x: a,
            y: w_scalar(q, a, d)?,
        });
        markers.push(Marker {
            figure: 5,
            curve: curve.clone(),
            marker: "sqrt_half_q_minus_1",
            x: low,
            y: w_scalar(q, low, d)?,
        });
        markers.push(Marker {
            figure: 5,
            curve,
            marker: "D_star",
            x: d,
            y: w_scalar(q, d, d)?,
        });
    }
    Ok(t)
}

/// Value functions and payoffs at `t = 0`.
fn figure6(markers: &mut Vec<Marker>) -> Res<Table> {
    let panels = [
        ProblemSpec::problem1(),
        ProblemSpec::problem2(0),
        ProblemSpec::problem2(1),
        ProblemSpec::problem3(2.0)?,
    ];
    let mut names = Vec::new();
    let mut cands = Vec::new();
    for p in panels {
        let set = solve(p)?;
        let cand = Candidate::new(&set)?;
        let (value, payoff) = match p.number() {
            1 => ("V*".to_string(), "f".to_string()),
            2 => (format!("J*[n={}]", p.n), format!("g[n={}]", p.n)),
            _ => (format!("W*[q={}]", p.q), format!("h[q={}]", p.q)),
        };
        for x in cand.boundaries(0.0) {
            let y = cand.value(SpacePoint::new(0.0, x)?)?.value;
            let marker = match p.number() {
                1 => "C_star",
                2 if x < 0.0 => "minus_B_star",
                2 => "B_star",
                _ if x < 0.0 => "minus_A_star",
                _ => "A_star",
            };
            markers.push(Marker {
                figure: 6,
                curve: value.clone(),
                marker,
                x,
                y,
            });
        }
        names.push(value);
        names.push(payoff);
        cands.push(cand);
    }
    let mut t = Table::new("x", names);
    for x in linspace(-3.0, 3.0, 600) {
        let point = SpacePoint::new(0.0, x)?;
        let mut row = vec![Some(x)];
        for cand in &cands {
            row.push(Some(cand.value(point)?.value));
            row.push(Some(cand.payoff(point)?));
        }
        t.rows.push(row);
    }
    Ok(t)
}

/// Write `figure-1.csv` … `figure-6.csv` and `markers.csv` into `dir`.
pub fn write_all(dir: &Path) -> Res<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| crate::output::io_error(dir, e))?;
    let mut markers = Vec::new();
    let tables = [
        figure1(&mut markers)?,
        figure2(&mut markers)?,
        figure3(&mut markers)?,
        figure4(&mut markers)?,
        figure5(&mut markers)?,
        figure6(&mut markers)?,
    ];
    let mut written = Vec::new();
    for (i, table) in tables.iter().enumerate() {
        let path = dir.join(format!("figure-{}.csv", i + 1));
        table.write(&path)?;
        written.push(path);
    }
    let path = dir.join("markers.csv");
    let header: Vec<String> = ["figure", "curve", "marker", "x", "y"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = markers
        .iter()
        .map(|m| {
            vec![
                m.figure.to_string(),
                m.curve.clone(),
                m.marker.to_string(),
                num(m.x),
                num(m.y),
            ]
        })
        .collect();
    write_csv(&path, &header, &rows)?;
    written.push(path);
    Ok(written)
}
