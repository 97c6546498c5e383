//! SVG pictures of planar disc configurations.
//!
//! Each root of the element gets a 512x512 cell: the unit disc for an `f`
//! root, the unit half-disc for an `h` root (content clipped to the upper
//! half-plane, the bounding hyperplane drawn as a horizontal line), and a
//! bare cell for a collapsed root. Discs are drawn as circles, collapsed
//! discs as dots. Coordinates are formatted with fixed precision so equal
//! elements render to byte-identical documents.

use std::fmt::Write;

use thiserror::Error;

use crate::sc::{DiscDatum, ScElement, COLOR_F, COLOR_H};

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("only d = 2 renders, got d = {0}")]
    NotPlanar(usize),
    #[error("root {0:?} has no data")]
    MissingData(String),
}

const CELL: f64 = 512.0;
const RADIUS: f64 = 240.0;

struct Cell {
    ox: f64,
}

impl Cell {
    fn x(&self, v: f64) -> f64 {
        self.ox + CELL / 2.0 + RADIUS * v
    }

    // SVG y grows downward.
    fn y(&self, v: f64) -> f64 {
        CELL / 2.0 - RADIUS * v
    }

    fn len(&self, v: f64) -> f64 {
        RADIUS * v
    }
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Render a d = 2 element, one cell per root in root order.
pub fn render_svg(e: &ScElement) -> Result<String, RenderError> {
    if e.d != 2 {
        return Err(RenderError::NotPlanar(e.d));
    }
    let roots: Vec<&str> = e.shape.outputs.ids().collect();
    let width = CELL * roots.len().max(1) as f64;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        px(width),
        px(CELL),
        px(width),
        px(CELL)
    );
    svg.push_str("<defs><clipPath id=\"upper\"><rect x=\"0\" y=\"0\" width=\"100%\" height=\"256\"/></clipPath></defs>\n");
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, root) in roots.iter().enumerate() {
        let cell = Cell { ox: CELL * i as f64 };
        let color = e.shape.outputs.color_of(root).unwrap_or("?");
        let data = e.data.get(*root).ok_or_else(|| RenderError::MissingData(root.to_string()))?;
        let clipped = color == COLOR_H;
        let _ = write!(svg, "<g transform=\"translate({} 0)\">\n", px(cell.ox));
        if clipped {
            svg.push_str("<g clip-path=\"url(#upper)\">\n");
        }
        if color == COLOR_F || color == COLOR_H {
            let _ = write!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
                px(CELL / 2.0),
                px(CELL / 2.0),
                px(RADIUS)
            );
        }
        for datum in data {
            match datum {
                DiscDatum::F { r, c } => {
                    let _ = write!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
                        px(cell.x(c[0]) - cell.ox),
                        px(cell.y(c[1])),
                        px(cell.len(*r))
                    );
                }
                DiscDatum::H { r, c } => {
                    let _ = write!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"darkorange\" stroke-width=\"1.5\"/>\n",
                        px(cell.x(c[0]) - cell.ox),
                        px(cell.y(c[1])),
                        px(cell.len(*r))
                    );
                }
                DiscDatum::FBullet { q: Some(q) } => {
                    let _ = write!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"steelblue\"/>\n",
                        px(cell.x(q[0]) - cell.ox),
                        px(cell.y(q[1]))
                    );
                }
                DiscDatum::FBullet { q: None } => {}
                DiscDatum::HBullet { q } => {
                    let _ = write!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"darkorange\"/>\n",
                        px(cell.x(q[0]) - cell.ox),
                        px(cell.y(q[1]))
                    );
                }
            }
        }
        if clipped {
            svg.push_str("</g>\n");
            let _ = write!(
                svg,
                "<line x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                px(CELL / 2.0),
                px(CELL)
            );
        }
        let _ = write!(
            svg,
            "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"14\">{} : {}</text>\n",
            root, color
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
