//! Reference implementations used as oracles. They share no code with the
//! library's coverage or search routines.
#![allow(dead_code)]

use rand::Rng;
use snapfix_core::{Polyhedron, Vec3};

/// Hemispheres with these normals cover the sphere iff the origin lies
/// strictly inside the convex hull of the normals. Checked through the
/// supporting planes spanned by triples: a supporting plane whose offset is
/// within `eps` of zero (or a hull that is not full-dimensional) exposes an
/// uncovered direction.
pub fn origin_strictly_inside_hull(normals: &[Vec3], eps: f64) -> bool {
    let pts: Vec<Vec3> = normals.iter().map(|n| n.normalized()).collect();
    let n = pts.len();
    if n < 4 {
        return false;
    }
    let mut full_dim = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
                let len = m.norm();
                if len < 1e-12 {
                    continue;
                }
                let m = m / len;
                let c = m.dot(pts[i]);
                let (mut above, mut below) = (false, false);
                for p in &pts {
                    let s = m.dot(*p) - c;
                    if s > 1e-12 {
                        above = true;
                    } else if s < -1e-12 {
                        below = true;
                    }
                }
                if above && below {
                    full_dim = true;
                    continue;
                }
                if !above && !below {
                    // All points on one plane: no interior.
                    return false;
                }
                full_dim = true;
                // Orient so that every point satisfies m·p <= c'.
                let c_out = if above { -c } else { c };
                if c_out <= eps {
                    return false;
                }
            }
        }
    }
    full_dim
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let l = v.norm();
        if l > 1e-3 && l <= 1.0 {
            return v / l;
        }
    }
}

/// `min over samples of max_i nᵢ·d`, refined by a local pattern search from
/// the best few samples. Nonpositive values mean an uncovered direction was found.
pub fn monte_carlo_extremum(normals: &[Vec3], samples: &[Vec3]) -> f64 {
    let f = |d: Vec3| normals.iter().map(|n| n.dot(d)).fold(f64::NEG_INFINITY, f64::max);
    let mut scored: Vec<(f64, Vec3)> = samples.iter().map(|&d| (f(d), d)).collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = scored[0].0;
    for &(mut v, mut d) in scored.iter().take(8) {
        let mut step = 0.02;
        let mut budget = 600;
        while step > 1e-12 && budget > 0 {
            budget -= 1;
            let (u, w) = {
                let u = d.any_orthogonal();
                (u, d.cross(u))
            };
            let mut improved = false;
            for dir in [u, -u, w, -w, (u + w).normalized(), (u - w).normalized(), (-u + w).normalized(), (-u - w).normalized()] {
                let cand = (d + dir * step).normalized();
                let fv = f(cand);
                if fv < v {
                    v = fv;
                    d = cand;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(v);
    }
    best
}

pub fn merged(p: Polyhedron) -> Polyhedron {
    p.merge_coplanar_facets(snapfix_core::MeshTolerance::default()).unwrap()
}

/// Valid `k`-finger fixtures on `p` counted by plain subset enumeration over
/// `{(j, l) : j ~ i, l ~ j, l != i}` with the hull oracle for C1 and C2.
pub fn brute_force_count(p: &Polyhedron, k: usize, eps: f64) -> u64 {
    let normal = |i: usize| p.facets()[i].normal;
    let mut total = 0;
    for i in 0..p.facet_count() {
        let mut m = Vec::new();
        for &j in p.neighbors(i) {
            for &l in p.neighbors(j) {
                if l != i {
                    m.push((j, l));
                }
            }
        }
        for_each_subset(m.len(), k, &mut |idx| {
            let fingers: Vec<(usize, usize)> = idx.iter().map(|&x| m[x]).collect();
            let mut bodies: Vec<usize> = fingers.iter().map(|f| f.0).collect();
            bodies.sort_unstable();
            if bodies.windows(2).any(|w| w[0] == w[1]) {
                return;
            }
            let mut pb = vec![i];
            pb.extend(&bodies);
            let mut pbt = pb.clone();
            pbt.extend(fingers.iter().map(|f| f.1));
            pbt.sort_unstable();
            pbt.dedup();
            let pbn: Vec<Vec3> = pb.iter().map(|&x| normal(x)).collect();
            let pbtn: Vec<Vec3> = pbt.iter().map(|&x| normal(x)).collect();
            if !origin_strictly_inside_hull(&pbn, eps) && origin_strictly_inside_hull(&pbtn, eps) {
                total += 1;
            }
        });
    }
    total
}

pub fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}
