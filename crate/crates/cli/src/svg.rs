//! Deterministic SVG drawings of curves, inflection components, projected space graphs and
//! patchwork diagrams.

use std::fmt::Write as _;

use tropinflect_core::inflect::InflectionComponent;
use tropinflect_core::intersect::IntersectionComponent;
use tropinflect_core::modify::{vertical_ends, SpaceGraph};
use tropinflect_core::patchwork::{RealArcDiagram, SignedTriangulation};
use tropinflect_core::{LatticePoint, Piece, RationalPoint, TropicalCurve};

pub const WIDTH: f64 = 640.0;
/// Default ray stub, as a fraction of the vertex bounding-box diagonal.
pub const DEFAULT_STUB_FRACTION: f64 = 0.15;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Seg([f64; 2], [f64; 2]),
    Ray([f64; 2], [f64; 2]),
    Dot([f64; 2]),
}

#[derive(Clone, Debug, PartialEq)]
struct Item {
    shape: Shape,
    class: &'static str,
    color: &'static str,
    width: f64,
    label: Option<String>,
}

/// A list of plane shapes in world coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    items: Vec<Item>,
}

fn xy(p: &RationalPoint) -> [f64; 2] {
    let (x, y) = p.to_f64();
    [x, y]
}

fn dir(d: LatticePoint) -> [f64; 2] {
    [d.i as f64, d.j as f64]
}

fn weight_label(w: i64) -> Option<String> {
    (w != 1).then(|| w.to_string())
}

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn push(&mut self, shape: Shape, class: &'static str, color: &'static str, width: f64, label: Option<String>) {
        self.items.push(Item { shape, class, color, width, label });
    }

    fn piece(&mut self, p: &Piece, class: &'static str, color: &'static str, width: f64) {
        let shape = match p {
            Piece::Point(a) => Shape::Dot(xy(a)),
            Piece::Segment(a, b) => Shape::Seg(xy(a), xy(b)),
            Piece::Ray(a, d) => Shape::Ray(xy(a), dir(*d)),
        };
        self.push(shape, class, color, width, None);
    }

    pub fn curve(c: &TropicalCurve) -> Self {
        let mut s = Scene::default();
        s.add_curve(c, "curve", "#222222");
        s
    }

    fn add_curve(&mut self, c: &TropicalCurve, class: &'static str, color: &'static str) {
        for e in &c.edges {
            let (a, b) = (xy(&c.vertices[e.v1].position), xy(&c.vertices[e.v2].position));
            self.push(Shape::Seg(a, b), class, color, 1.5, weight_label(e.weight));
        }
        for r in &c.rays {
            self.push(Shape::Ray(xy(&c.vertices[r.v].position), dir(r.dir)), class, color, 1.5, weight_label(r.weight));
        }
        if c.edges.is_empty() && c.rays.is_empty() {
            for v in &c.vertices {
                self.push(Shape::Dot(xy(&v.position)), class, color, 1.5, None);
            }
        }
    }

    /// Curve with its inflection components: points as dots, segments and rays bold.
    pub fn inflection(c: &TropicalCurve, comps: &[InflectionComponent]) -> Self {
        let mut s = Scene::curve(c);
        for (k, comp) in comps.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            for g in &comp.geometry {
                s.piece(g, "component", color, 5.0);
            }
        }
        s
    }

    pub fn intersection(c1: &TropicalCurve, c2: &TropicalCurve, comps: &[IntersectionComponent]) -> Self {
        let mut s = Scene::default();
        s.add_curve(c1, "curve", "#222222");
        s.add_curve(c2, "curve second", "#1f77b4");
        for comp in comps {
            for g in &comp.geometry {
                s.piece(g, "component", "#d62728", 4.0);
            }
            for p in &comp.points {
                s.push(Shape::Dot(xy(&p.position)), "point", "#d62728", 1.0, weight_label(p.multiplicity));
            }
        }
        s
    }

    /// Plane projection of a space graph; vertical ends become labelled dots.
    pub fn space_graph(g: &SpaceGraph) -> Self {
        let mut s = Scene::default();
        for p in g.projected_pieces() {
            s.piece(&p, "curve", "#222222", 1.5);
        }
        for w in &g.walls {
            s.piece(&w.base, "wall", "#999999", 0.75);
        }
        for q in vertical_ends(g).points {
            s.push(Shape::Dot(xy(&q.point)), "vertical-end", "#d62728", 1.0, weight_label(q.weight));
        }
        if s.is_empty() {
            for v in &g.vertices {
                s.push(Shape::Dot(xy(&v.projection())), "vertex", "#222222", 1.0, None);
            }
        }
        s
    }

    /// Four reflected copies of the triangulation with the glued arcs, one colour per component.
    pub fn patchwork(st: &SignedTriangulation, dg: &RealArcDiagram) -> Self {
        let mut s = Scene::default();
        let d = st.d as f64;
        let corners = [[d, 0.0], [0.0, d], [-d, 0.0], [0.0, -d]];
        for k in 0..4 {
            s.push(Shape::Seg(corners[k], corners[(k + 1) % 4]), "boundary", "#222222", 1.5, None);
        }
        let place = |p: LatticePoint, q: [i8; 2]| [p.i as f64 * q[0] as f64, p.j as f64 * q[1] as f64];
        for q in tropinflect_core::patchwork::QUADRANTS {
            for t in &st.triangles {
                for e in 0..3 {
                    s.push(Shape::Seg(place(t[e], q), place(t[(e + 1) % 3], q)), "triangulation", "#cccccc", 0.5, None);
                }
            }
        }
        let mut owner = vec![0usize; dg.arcs.len()];
        for (k, c) in dg.components.iter().enumerate() {
            for &a in &c.arcs {
                owner[a] = k;
            }
        }
        for (k, arc) in dg.arcs.iter().enumerate() {
            let t = &st.triangles[arc.triangle];
            let sg: Vec<i8> =
                t.iter().map(|p| tropinflect_core::patchwork::reflected_sign(st.signs[p], *p, arc.quadrant)).collect();
            let mids: Vec<[f64; 2]> = (0..3)
                .filter(|&e| sg[e] != sg[(e + 1) % 3])
                .map(|e| {
                    let (a, b) = (place(t[e], arc.quadrant), place(t[(e + 1) % 3], arc.quadrant));
                    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
                })
                .collect();
            if let [a, b] = mids[..] {
                s.push(Shape::Seg(a, b), "arc", PALETTE[owner[k] % PALETTE.len()], 2.5, None);
            }
        }
        s
    }
}

struct View {
    min: [f64; 2],
    scale: f64,
    height: f64,
    pad: f64,
}

impl View {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (self.pad + (p[0] - self.min[0]) * self.scale, self.height - self.pad - (p[1] - self.min[1]) * self.scale)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// SVG document for `scene`; `stub_len` overrides the default ray stub length (world units).
pub fn render_svg(scene: &Scene, stub_len: Option<f64>) -> String {
    let mut out = String::new();
    if scene.is_empty() {
        let h = WIDTH * 0.75;
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#, w = num(WIDTH), h = num(h));
        let _ = writeln!(out, r#"<rect class="frame" x="0.50" y="0.50" width="{}" height="{}" fill="white" stroke="black"/>"#, num(WIDTH - 1.0), num(h - 1.0));
        out.push_str("</svg>\n");
        return out;
    }
    let anchors: Vec<[f64; 2]> = scene
        .items
        .iter()
        .flat_map(|it| match it.shape {
            Shape::Seg(a, b) => vec![a, b],
            Shape::Ray(a, _) | Shape::Dot(a) => vec![a],
        })
        .collect();
    let bbox = |pts: &[[f64; 2]]| {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    };
    let (lo, hi) = bbox(&anchors);
    let diag = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    let stub = stub_len.unwrap_or(DEFAULT_STUB_FRACTION * if diag > 0.0 { diag } else { 10.0 });
    let ray_end = |a: [f64; 2], d: [f64; 2]| {
        let n = d[0].hypot(d[1]);
        [a[0] + stub * d[0] / n, a[1] + stub * d[1] / n]
    };
    let mut all = anchors.clone();
    for it in &scene.items {
        if let Shape::Ray(a, d) = it.shape {
            all.push(ray_end(a, d));
        }
    }
    let (mut lo, mut hi) = bbox(&all);
    let margin = 0.05 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    for k in 0..2 {
        lo[k] -= margin;
        hi[k] += margin;
    }
    let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
    let pad = 10.0;
    let scale = (WIDTH - 2.0 * pad) / w.max(h);
    let height = (h * scale + 2.0 * pad).max(2.0 * pad + 1.0);
    let width = w * scale + 2.0 * pad;
    let view = View { min: lo, scale, height, pad };

    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(out, r#"<rect class="frame" x="0.50" y="0.50" width="{}" height="{}" fill="white" stroke="black"/>"#, num(width - 1.0), num(height - 1.0));
    let mut dots = String::new();
    for it in &scene.items {
        let (a, b) = match it.shape {
            Shape::Seg(a, b) => (a, b),
            Shape::Ray(a, d) => (a, ray_end(a, d)),
            Shape::Dot(a) => {
                let (x, y) = view.map(a);
                let _ = writeln!(dots, r#"<circle class="{}" cx="{}" cy="{}" r="5.00" fill="{}"/>"#, it.class, num(x), num(y), it.color);
                if let Some(l) = &it.label {
                    let _ = writeln!(dots, r#"<text x="{}" y="{}" font-size="11">{l}</text>"#, num(x + 6.0), num(y - 6.0));
                }
                continue;
            }
        };
        let (x1, y1) = view.map(a);
        let (x2, y2) = view.map(b);
        let _ = writeln!(
            out,
            r#"<line class="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}" stroke-linecap="round"/>"#,
            it.class,
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            it.color,
            num(it.width)
        );
        if let Some(l) = &it.label {
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{l}</text>"#, num((x1 + x2) / 2.0 + 4.0), num((y1 + y2) / 2.0 - 4.0));
        }
    }
    out.push_str(&dots);
    out.push_str("</svg>\n");
    out
}
