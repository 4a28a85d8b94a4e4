//! Mesh and field generators for the bundled example corpus and tests.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::plmorse::{validate_morse, MorseData, ScalarField};
use crate::surface::{validate_surface, TriSurface};
use crate::value::Value;

pub fn tetrahedron_triangles() -> Vec<[usize; 3]> {
    vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
}

/// Suspension of an `n`-cycle: poles 0 and 1, ring `2..n+2`.
pub fn bipyramid_triangles(n: usize) -> Vec<[usize; 3]> {
    let ring = |i: usize| 2 + i % n;
    (0..n).flat_map(|i| [[0, ring(i), ring(i + 1)], [1, ring(i + 1), ring(i)]]).collect()
}

pub fn octahedron_triangles() -> Vec<[usize; 3]> {
    bipyramid_triangles(4)
}

/// Seven-vertex torus.
pub fn csaszar_torus_triangles() -> Vec<[usize; 3]> {
    (0..7)
        .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 3) % 7, (i + 2) % 7]])
        .collect()
}

/// Five-vertex Möbius band; the boundary is a single 5-cycle.
pub fn mobius5_triangles() -> Vec<[usize; 3]> {
    (0..5).map(|i| [i, (i + 1) % 5, (i + 2) % 5]).collect()
}

/// Six-vertex projective plane.
pub fn rp2_triangles() -> Vec<[usize; 3]> {
    vec![
        [0, 1, 3],
        [0, 1, 5],
        [0, 2, 4],
        [0, 2, 5],
        [0, 3, 4],
        [1, 2, 3],
        [1, 2, 4],
        [1, 4, 5],
        [2, 3, 5],
        [3, 4, 5],
    ]
}

/// Disk as a cone over an `n`-gon: centre 0 at level 0, rim level 1.
pub fn fan_disk(n: usize) -> (TriSurface, ScalarField) {
    let tris: Vec<[usize; 3]> = (0..n).map(|i| [0, 1 + i, 1 + (i + 1) % n]).collect();
    let s = validate_surface(&tris).unwrap();
    let mut vals = vec![Value::from_int(1); n + 1];
    vals[0] = Value::zero();
    (s, ScalarField::real(vals))
}

/// How a grid direction closes up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seam {
    Open,
    Periodic,
    /// Periodic with the other coordinate reflected across the seam.
    Twisted,
}

/// Triangulated `nx × ny` grid of squares with the given identifications in
/// `x`; `y` is periodic when `y_periodic` and open otherwise.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x_seam: Seam,
    pub y_periodic: bool,
}

impl Grid {
    fn rows(&self) -> usize {
        if self.y_periodic {
            self.ny
        } else {
            self.ny + 1
        }
    }

    fn cols(&self) -> usize {
        match self.x_seam {
            Seam::Open => self.nx + 1,
            _ => self.nx,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Vertex id of lattice point `(i, j)`, `0 ≤ i ≤ nx`, `0 ≤ j ≤ ny`.
    pub fn id(&self, i: usize, j: usize) -> usize {
        let (mut i, mut j) = (i, j);
        if i == self.nx {
            match self.x_seam {
                Seam::Open => {}
                Seam::Periodic => i = 0,
                Seam::Twisted => {
                    i = 0;
                    j = if self.y_periodic { (self.ny - j) % self.ny } else { self.ny - j };
                }
            }
        }
        if self.y_periodic {
            j %= self.ny;
        }
        j * self.cols() + i
    }

    /// Lattice coordinates of a vertex id.
    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.cols(), v / self.cols())
    }

    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(2 * self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                let a = self.id(i, j);
                let b = self.id(i + 1, j);
                let c = self.id(i + 1, j + 1);
                let d = self.id(i, j + 1);
                out.push([a, b, c]);
                out.push([a, c, d]);
            }
        }
        out
    }

    pub fn surface(&self) -> TriSurface {
        TriSurface::new(self.vertex_count(), self.triangles()).expect("grid generator produced an invalid mesh")
    }
}

pub fn torus_grid(nx: usize, ny: usize) -> Grid {
    Grid { nx, ny, x_seam: Seam::Periodic, y_periodic: true }
}

/// Annulus: periodic in `x`, boundary rows `j = 0` and `j = ny`.
pub fn annulus_grid(nx: usize, ny: usize) -> Grid {
    Grid { nx, ny, x_seam: Seam::Periodic, y_periodic: false }
}

pub fn klein_grid(nx: usize, ny: usize) -> Grid {
    Grid { nx, ny, x_seam: Seam::Twisted, y_periodic: true }
}

pub fn mobius_grid(nx: usize, ny: usize) -> Grid {
    Grid { nx, ny, x_seam: Seam::Twisted, y_periodic: false }
}

/// Disk made of a central fan and `rings` concentric annuli of `n`
/// vertices each; the outermost ring is the boundary.
pub fn polar_disk_triangles(n: usize, rings: usize) -> Vec<[usize; 3]> {
    let ring = |r: usize, k: usize| 1 + (r - 1) * n + k % n;
    let mut out: Vec<[usize; 3]> = (0..n).map(|k| [0, ring(1, k), ring(1, k + 1)]).collect();
    for r in 1..rings {
        for k in 0..n {
            out.push([ring(r, k), ring(r + 1, k), ring(r + 1, k + 1)]);
            out.push([ring(r, k), ring(r + 1, k + 1), ring(r, k + 1)]);
        }
    }
    out
}

/// Closed orientable genus-2 surface: two grid tori glued along the
/// boundary of one removed triangle each.
pub fn genus2_triangles(n: usize) -> (usize, Vec<[usize; 3]>) {
    let g = torus_grid(n, n);
    let base = g.vertex_count();
    let first = g.triangles();
    let hole = first[0];
    let [a, b, c] = hole;
    let mut second = g.triangles();
    let [d, e, f] = second.remove(0);
    // d->a, e->c, f->b reverses the hole orientation so both halves agree
    let relabel = |v: usize| -> Option<usize> {
        if v == d {
            Some(a)
        } else if v == e {
            Some(c)
        } else if v == f {
            Some(b)
        } else {
            None
        }
    };
    let others: Vec<usize> = (0..base).filter(|&v| v != d && v != e && v != f).collect();
    let mut map = vec![0usize; base];
    for (k, &v) in others.iter().enumerate() {
        map[v] = base + k;
    }
    for v in [d, e, f] {
        map[v] = relabel(v).unwrap();
    }
    let mut tris: Vec<[usize; 3]> = first[1..].to_vec();
    tris.extend(second.iter().map(|t| t.map(|v| map[v])));
    (base + others.len(), tris)
}

pub fn genus2_surface(n: usize) -> TriSurface {
    let (vc, tris) = genus2_triangles(n);
    TriSurface::new(vc, tris).expect("genus-2 generator produced an invalid mesh")
}

/// Exact rational approximation with denominator `10^6`.
fn exact(x: f64) -> Value {
    Value::ratio((x * 1e6).round() as i64, 1_000_000)
}

/// Height of a standing torus sampled on a grid: one minimum, two saddles,
/// one maximum.
pub fn torus_height(nx: usize, ny: usize) -> (TriSurface, ScalarField) {
    let g = torus_grid(nx, ny);
    let s = g.surface();
    let vals = (0..g.vertex_count())
        .map(|v| {
            let (i, j) = g.coords(v);
            let u = std::f64::consts::TAU * i as f64 / nx as f64;
            let w = std::f64::consts::TAU * j as f64 / ny as f64;
            exact((2.0 + w.cos()) * u.cos() + 1e-3 * w.sin())
        })
        .collect();
    (s, ScalarField::real(vals))
}

/// `cos x + cos y` on the grid torus: both saddles lie on one level
/// component.
pub fn egg_crate(n: usize) -> (TriSurface, ScalarField) {
    let g = torus_grid(n, n);
    let vals = (0..g.vertex_count())
        .map(|v| {
            let (i, j) = g.coords(v);
            let u = std::f64::consts::TAU * i as f64 / n as f64;
            let w = std::f64::consts::TAU * j as f64 / n as f64;
            exact(u.cos()).add(&exact(w.cos()))
        })
        .collect();
    (g.surface(), ScalarField::real(vals))
}

/// Circle-valued `x`-projection of the grid torus wrapping `degree` times.
pub fn torus_circle_field(nx: usize, ny: usize, degree: usize) -> (TriSurface, ScalarField) {
    let g = torus_grid(nx, ny);
    let vals = (0..g.vertex_count()).map(|v| Value::ratio((degree * g.coords(v).0) as i64, nx as i64)).collect();
    (g.surface(), ScalarField::circle(vals))
}

/// Circle-valued `x`-projection of the grid Klein bottle wrapping `degree`
/// times around the seam direction.
pub fn klein_circle_field(nx: usize, ny: usize, degree: usize) -> (TriSurface, ScalarField) {
    let g = klein_grid(nx, ny);
    let vals = (0..g.vertex_count()).map(|v| Value::ratio((degree * g.coords(v).0) as i64, nx as i64)).collect();
    (g.surface(), ScalarField::circle(vals))
}

/// Annulus with the product field `t`: boundary rows at 0 and 1.
pub fn annulus_product(nx: usize, ny: usize) -> (TriSurface, ScalarField) {
    let g = annulus_grid(nx, ny);
    let vals = (0..g.vertex_count()).map(|v| Value::ratio(g.coords(v).1 as i64, ny as i64)).collect();
    (g.surface(), ScalarField::real(vals))
}

/// Random injective integer field; every boundary cycle is placed at a
/// common level above all interior values.
pub fn random_field(s: &TriSurface, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.vertex_count();
    let mut perm: Vec<i64> = (0..n as i64).collect();
    perm.shuffle(&mut rng);
    let vals = (0..n)
        .map(|v| if s.is_boundary_vertex(v) { Value::from_int(n as i64) } else { Value::from_int(perm[v]) })
        .collect();
    ScalarField::real(vals)
}

/// Searches seeds `start..start+tries` for a random field accepted by the
/// Morse validator and satisfying `pred`.
pub fn search_field(
    s: &TriSurface,
    start: u64,
    tries: u64,
    pred: impl Fn(&MorseData) -> bool,
) -> Option<(u64, ScalarField, MorseData)> {
    (start..start + tries).find_map(|seed| {
        let f = random_field(s, seed);
        let md = validate_morse(s, &f).ok()?;
        pred(&md).then_some((seed, f, md))
    })
}
