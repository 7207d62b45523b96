//! Brute-force structure metrics straight from their textbook definitions:
//! dense adjacency, naive triple enumeration, explicit Pearson correlation.

use super::RawGraph;

#[derive(Debug, Clone, Copy)]
pub struct Expected {
    pub density: f64,
    pub avg_degree: f64,
    pub std_in: f64,
    pub std_out: f64,
    pub iod_in: f64,
    pub iod_out: f64,
    pub acc: f64,
    pub gcc: f64,
    pub dac: f64,
}

/// Undirected simple adjacency matrix, self-loops dropped.
fn undirected(g: &RawGraph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n]; g.n];
    for &(u, v) in &g.edges {
        if u != v {
            a[u][v] = true;
            a[v][u] = true;
        }
    }
    a
}

fn std_dev(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

pub fn expected(g: &RawGraph) -> Expected {
    let n = g.n as f64;
    let m = g.edges.len() as f64;
    let mut ins = vec![0.0; g.n];
    let mut outs = vec![0.0; g.n];
    for &(u, v) in &g.edges {
        outs[u] += 1.0;
        ins[v] += 1.0;
    }
    let avg_degree = m / n;
    let (std_in, std_out) = (std_dev(&ins), std_dev(&outs));
    let iod = |s: f64| {
        if avg_degree == 0.0 {
            0.0
        } else {
            s * s / avg_degree
        }
    };

    let a = undirected(g);
    let deg: Vec<usize> = a.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();

    // local clustering: linked neighbour pairs over all neighbour pairs
    let mut acc = 0.0;
    for i in 0..g.n {
        let nb: Vec<usize> = (0..g.n).filter(|&j| a[i][j]).collect();
        if nb.len() < 2 {
            continue;
        }
        let mut linked = 0;
        let mut pairs = 0;
        for x in 0..nb.len() {
            for y in x + 1..nb.len() {
                pairs += 1;
                if a[nb[x]][nb[y]] {
                    linked += 1;
                }
            }
        }
        acc += linked as f64 / pairs as f64;
    }
    acc /= n;

    // transitivity: every ordered triple i<j<k checked directly
    let mut triangles = 0usize;
    for i in 0..g.n {
        for j in i + 1..g.n {
            for k in j + 1..g.n {
                if a[i][j] && a[j][k] && a[i][k] {
                    triangles += 1;
                }
            }
        }
    }
    let triplets: usize = deg.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    let gcc = if triplets == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triplets as f64
    };

    // Pearson over (deg u, deg v) for both orientations of each edge
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in 0..g.n {
        for v in 0..g.n {
            if a[u][v] {
                xs.push(deg[u] as f64);
                ys.push(deg[v] as f64);
            }
        }
    }
    let dac = if xs.is_empty() {
        0.0
    } else {
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if vx == 0.0 || vy == 0.0 {
            0.0
        } else {
            cov / (vx * vy).sqrt()
        }
    };

    Expected {
        density: if g.n < 2 { 0.0 } else { m / (n * (n - 1.0)) },
        avg_degree,
        std_in,
        std_out,
        iod_in: iod(std_in),
        iod_out: iod(std_out),
        acc,
        gcc,
        dac,
    }
}
