//! SVG and terminal renderings of a placement.

use std::fmt::Write as _;

use crate::coverage::{adjacency_coverage, line_mask, Coverage};
use crate::error::{Error, Result};
use crate::types::{DominationModel, Instance, Placement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub cell_px: u32,
    /// Six hex digits, no leading `#`.
    pub dominator_color: String,
    pub dominated_color: String,
    pub undominated_color: String,
    pub show_coverage: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell_px: 20,
            dominator_color: "1F77B4".into(),
            dominated_color: "555555".into(),
            undominated_color: "000000".into(),
            show_coverage: false,
        }
    }
}

impl RenderSpec {
    fn validate(&self) -> Result<()> {
        if self.cell_px == 0 {
            return Err(Error::validation("cell size must be at least one pixel"));
        }
        for c in [
            &self.dominator_color,
            &self.dominated_color,
            &self.undominated_color,
        ] {
            if c.len() != 6 || !c.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::validation(format!(
                    "'{c}' is not a 6-digit hex RGB color"
                )));
            }
        }
        Ok(())
    }
}

/// Coverage for display. Line dominators off the 1-pattern are drawn but cover nothing.
fn display_coverage(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
) -> Result<Coverage> {
    let dims = instance.dims();
    placement.check_bounds(dims)?;
    Ok(match model {
        DominationModel::Adjacency => adjacency_coverage(dims, placement)?,
        DominationModel::Line => line_mask(
            instance,
            placement.iter().filter(|&(i, j)| instance.get(i, j)),
        ),
    })
}

pub fn render_svg(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let cover = display_coverage(instance, placement, model)?;
    let dims = instance.dims();
    let px = spec.cell_px as usize;
    let (w, h) = (dims.cols * px, dims.rows * px);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for i in 0..dims.rows {
        for j in 0..dims.cols {
            let color = if placement.contains((i, j)) {
                &spec.dominator_color
            } else if spec.show_coverage && cover.is_covered(i, j) {
                &spec.dominated_color
            } else {
                &spec.undominated_color
            };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{px}\" height=\"{px}\" fill=\"#{color}\"/>",
                j * px,
                i * px
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// `#` dominator, `+` dominated, `.` undominated; one line per row.
pub fn render_ascii(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
) -> Result<String> {
    let cover = display_coverage(instance, placement, model)?;
    let dims = instance.dims();
    let mut out = String::with_capacity(dims.rows * (dims.cols + 1));
    for i in 0..dims.rows {
        for j in 0..dims.cols {
            out.push(if placement.contains((i, j)) {
                '#'
            } else if cover.is_covered(i, j) {
                '+'
            } else {
                '.'
            });
        }
        out.push('\n');
    }
    Ok(out)
}

/// The bare occupancy dump: `1` for a dominator, `0` elsewhere.
pub fn render_raw(instance: &Instance, placement: &Placement) -> Result<String> {
    let dims = instance.dims();
    placement.check_bounds(dims)?;
    let mut out = String::with_capacity(dims.rows * (dims.cols + 1));
    for i in 0..dims.rows {
        out.extend((0..dims.cols).map(|j| if placement.contains((i, j)) { '1' } else { '0' }));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Dims;

    fn grid(n: usize, m: usize) -> Instance {
        Instance::ones(Dims::new(n, m).unwrap())
    }

    const ADJ: DominationModel = DominationModel::Adjacency;

    #[test]
    fn ascii_examples() {
        assert_eq!(
            render_ascii(&grid(3, 3), &Placement::new([(1, 1)]), ADJ).unwrap(),
            ".+.\n+#+\n.+.\n"
        );
        assert_eq!(
            render_ascii(&grid(1, 1), &Placement::empty(), ADJ).unwrap(),
            ".\n"
        );
        assert_eq!(
            render_ascii(&grid(2, 2), &Placement::new([(0, 0)]), ADJ).unwrap(),
            "#+\n+.\n"
        );
        assert!(matches!(
            render_ascii(&grid(2, 2), &Placement::new([(2, 0)]), ADJ),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn raw_dump() {
        assert_eq!(
            render_raw(&grid(2, 3), &Placement::new([(0, 2), (1, 0)])).unwrap(),
            "001\n100\n"
        );
    }

    #[test]
    fn svg_single_dominator() {
        let svg = render_svg(
            &grid(1, 1),
            &Placement::new([(0, 0)]),
            ADJ,
            &RenderSpec::default(),
        )
        .unwrap();
        assert!(svg.contains("width=\"20\" height=\"20\""));
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains("fill=\"#1F77B4\""));
    }

    #[test]
    fn svg_empty_is_black() {
        let spec = RenderSpec {
            show_coverage: true,
            ..RenderSpec::default()
        };
        let svg = render_svg(&grid(2, 3), &Placement::empty(), ADJ, &spec).unwrap();
        assert_eq!(svg.matches("<rect").count(), 6);
        assert_eq!(svg.matches("fill=\"#000000\"").count(), 6);
        assert!(svg.contains("width=\"60\" height=\"40\""));
    }

    #[test]
    fn svg_coverage_and_determinism() {
        let spec = RenderSpec {
            show_coverage: true,
            cell_px: 3,
            ..RenderSpec::default()
        };
        let p = Placement::new([(1, 1)]);
        let a = render_svg(&grid(3, 3), &p, ADJ, &spec).unwrap();
        assert_eq!(a.matches("#555555").count(), 4);
        assert_eq!(a, render_svg(&grid(3, 3), &p, ADJ, &spec).unwrap());
        let bad = RenderSpec {
            dominator_color: "blue".into(),
            ..RenderSpec::default()
        };
        assert!(render_svg(&grid(3, 3), &p, ADJ, &bad).is_err());
    }
}
