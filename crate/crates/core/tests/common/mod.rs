#![allow(dead_code)]

use std::f64::consts::TAU;

use polyfix::hermite::{Node, NodeSystem};
use polyfix::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn unit_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

/// Multiplier with modulus uniform in `[lo, hi)`.
pub fn multiplier<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..TAU))
}

fn separated(points: &[Complex64], z: Complex64, min_sep: f64) -> bool {
    points.iter().all(|&p| (p - z).norm() >= min_sep)
}

/// `n` points in the unit disk, pairwise at least `min_sep` apart.
pub fn disk_points<R: Rng>(rng: &mut R, n: usize, min_sep: f64) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let z = unit_disk(rng, 1.0);
        if separated(&pts, z, min_sep) {
            pts.push(z);
        }
    }
    pts
}

/// Random node system with attractive multipliers (`|alpha| < 0.999`).
pub fn random_system<R: Rng>(rng: &mut R, n: usize, min_sep: f64) -> NodeSystem {
    let nodes = disk_points(rng, n, min_sep).into_iter().map(|z| Node::new(z, unit_disk(rng, 0.999))).collect();
    NodeSystem::new(nodes).expect("separated nodes")
}

/// Collinear attractive system on `point + t * direction`, `|t| <= 0.5`.
/// Returns the system and the unit direction.
pub fn collinear_system<R: Rng>(rng: &mut R, n: usize, min_sep: f64, vertical: bool) -> (NodeSystem, Complex64) {
    let (point, direction) = if vertical {
        // the imaginary axis, or a random vertical line
        let x = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-0.5..0.5) };
        (c(x, rng.gen_range(-0.3..0.3)), c(0.0, 1.0))
    } else {
        (unit_disk(rng, 0.4), Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
    };
    let mut ts: Vec<f64> = Vec::with_capacity(n);
    while ts.len() < n {
        let t = rng.gen_range(-0.5..0.5);
        if ts.iter().all(|&s: &f64| (s - t).abs() >= min_sep) {
            ts.push(t);
        }
    }
    let nodes = ts.into_iter().map(|t| Node::new(point + direction * t, unit_disk(rng, 0.999))).collect();
    (NodeSystem::new(nodes).expect("separated nodes"), direction)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Independent divided-difference oracle: the textbook recursion evaluated
/// naively (exponential in the span length), straight from the definition.
pub fn naive_divided_difference(sys: &NodeSystem, idx: &[usize]) -> Complex64 {
    match idx {
        [i] => sys.z(*i),
        [i, j] if i == j => sys.alpha(*i),
        _ => {
            let k = idx.len();
            let right = naive_divided_difference(sys, &idx[1..]);
            let left = naive_divided_difference(sys, &idx[..k - 1]);
            (right - left) / (sys.z(idx[k - 1]) - sys.z(idx[0]))
        }
    }
}

/// Node index list `0, 1, 1, 2, 2, ..., k-1, k-1, k` (0-based).
pub fn bridge_indices(k: usize) -> Vec<usize> {
    let mut v = vec![0];
    for i in 1..k {
        v.push(i);
        v.push(i);
    }
    v.push(k);
    v
}

/// Node index list `0, 0, 1, 1, ..., k-1, k-1`.
pub fn even_indices(k: usize) -> Vec<usize> {
    (0..k).flat_map(|i| [i, i]).collect()
}
