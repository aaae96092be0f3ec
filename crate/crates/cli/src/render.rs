//! Static SVG rendering of scenes and plans: walls, the (possibly tilted)
//! corridor, obstacle discs colored by connected component at a chosen
//! radius, the target, the gripper, and numbered sweep arrows for plans.

use std::fmt::Write as _;

use anyhow::{anyhow, Context};
use pushsweep_core::{
    components_at, geom::rotate, load_scene, path_region, Point2, Scene,
};

const SCALE: f64 = 900.0;
const MARGIN: f64 = 40.0;

const COMPONENT_COLORS: [&str; 8] = [
    "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
];

struct Canvas {
    svg: String,
    width_m: f64,
}

impl Canvas {
    fn new(depth: f64, width: f64) -> Self {
        let w = 2.0 * MARGIN + depth * SCALE;
        let h = 2.0 * MARGIN + width * SCALE;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
        );
        let _ = writeln!(
            svg,
            r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#333"/></marker></defs>"##
        );
        let _ = writeln!(svg, r#"<rect width="{w:.0}" height="{h:.0}" fill="white"/>"#);
        Self { svg, width_m: width }
    }

    /// World meters to SVG pixels; the shelf mouth is on the left and the
    /// north wall on top.
    fn px(&self, p: &Point2) -> (f64, f64) {
        (
            MARGIN + p.x * SCALE,
            MARGIN + (self.width_m - p.y) * SCALE,
        )
    }

    fn polygon(&mut self, pts: &[Point2], style: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = self.px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(self.svg, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
    }

    fn line(&mut self, a: &Point2, b: &Point2, style: &str) {
        let (x1, y1) = self.px(a);
        let (x2, y2) = self.px(b);
        let _ = writeln!(
            self.svg,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#
        );
    }

    fn circle(&mut self, c: &Point2, r_m: f64, style: &str) {
        let (x, y) = self.px(c);
        let _ = writeln!(
            self.svg,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" {style}/>"#,
            r_m * SCALE
        );
    }

    fn text(&mut self, at: &Point2, dx: f64, dy: f64, size: f64, content: &str) {
        let (x, y) = self.px(at);
        let _ = writeln!(
            self.svg,
            r##"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="{size:.0}" fill="#333">{content}</text>"##,
            x + dx,
            y + dy
        );
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn draw_shelf(canvas: &mut Canvas, scene: &Scene) {
    let ws = scene.config.ws;
    let sw = Point2::new(0.0, 0.0);
    let se = Point2::new(ws.depth, 0.0);
    let ne = Point2::new(ws.depth, ws.width);
    let nw = Point2::new(0.0, ws.width);
    let wall = r##"stroke="#222" stroke-width="4" fill="none""##;
    canvas.line(&sw, &se, wall);
    canvas.line(&se, &ne, wall);
    canvas.line(&ne, &nw, wall);
    // Open mouth of the shelf.
    canvas.line(
        &nw,
        &sw,
        r##"stroke="#999" stroke-width="2" stroke-dasharray="8,6" fill="none""##,
    );
}

fn draw_corridor(canvas: &mut Canvas, scene: &Scene) {
    if let Ok(region) = path_region(&scene.config) {
        let c = region.corridor;
        let corners = [
            Point2::new(c.lo.x, c.lo.y),
            Point2::new(c.hi.x, c.lo.y),
            Point2::new(c.hi.x, c.hi.y),
            Point2::new(c.lo.x, c.hi.y),
        ];
        let world: Vec<Point2> = corners
            .iter()
            .map(|p| rotate(p, region.frame_angle))
            .collect();
        canvas.polygon(
            &world,
            r##"fill="#ffd54f" fill-opacity="0.35" stroke="#c8a415" stroke-width="1.5""##,
        );
    }
}

fn draw_objects(canvas: &mut Canvas, scene: &Scene, radius: Option<f64>) {
    let config = &scene.config;
    let rho = config.ws.object_radius;
    // Component coloring applies to corridor members; other obstacles gray.
    let mut color_of = vec!["#b0b0b0"; config.obstacles.len()];
    if let (Some(r), Ok(region)) = (radius, path_region(config)) {
        let pts: Vec<Point2> = region.members.iter().map(|&i| config.obstacles[i]).collect();
        if !pts.is_empty() {
            let partition = components_at(&pts, r);
            for (ci, comp) in partition.components.iter().enumerate() {
                for &k in comp {
                    color_of[region.members[k]] =
                        COMPONENT_COLORS[ci % COMPONENT_COLORS.len()];
                }
            }
        }
    }
    for (i, p) in config.obstacles.iter().enumerate() {
        let style = format!(
            r##"fill="{}" fill-opacity="0.85" stroke="#333" stroke-width="1""##,
            color_of[i]
        );
        canvas.circle(p, rho, &style);
        canvas.text(p, -4.0, 4.0, 12.0, &format!("{i}"));
    }
    canvas.circle(
        &config.target,
        rho,
        r##"fill="#ff8f00" stroke="#a35b00" stroke-width="2""##,
    );
    canvas.text(&config.target, -4.0, 4.0, 12.0, "T");
    // Gripper: a triangle pointing along its heading.
    let g = config.gripper.position;
    let a = config.gripper.heading;
    let tip = Point2::new(g.x + 0.025 * a.cos(), g.y + 0.025 * a.sin());
    let left = Point2::new(
        g.x + 0.015 * (a + 2.5).cos(),
        g.y + 0.015 * (a + 2.5).sin(),
    );
    let right = Point2::new(
        g.x + 0.015 * (a - 2.5).cos(),
        g.y + 0.015 * (a - 2.5).sin(),
    );
    canvas.polygon(
        &[tip, left, right],
        r##"fill="#444" stroke="#000" stroke-width="1""##,
    );
}

/// Renders a scene document.
pub fn render_scene_svg(scene: &Scene, radius: Option<f64>) -> String {
    let mut canvas = Canvas::new(scene.config.ws.depth, scene.config.ws.width);
    draw_corridor(&mut canvas, scene);
    draw_shelf(&mut canvas, scene);
    draw_objects(&mut canvas, scene, radius);
    canvas.text(
        &Point2::new(0.0, scene.config.ws.width),
        0.0,
        -10.0,
        14.0,
        &scene.id,
    );
    canvas.finish()
}

/// Renders a plan document produced by `solve`: the initial scene plus one
/// numbered arrow per sweep from its start front to its stop front.
pub fn render_plan_svg(doc: &serde_json::Value, radius: Option<f64>) -> anyhow::Result<String> {
    let scene_doc = doc
        .get("scene")
        .ok_or_else(|| anyhow!("plan document has no embedded scene"))?;
    let scene = load_scene(&serde_json::to_string(scene_doc)?)
        .context("embedded scene does not validate")?;
    let mut canvas = Canvas::new(scene.config.ws.depth, scene.config.ws.width);
    draw_corridor(&mut canvas, &scene);
    draw_shelf(&mut canvas, &scene);
    draw_objects(&mut canvas, &scene, radius);

    // Final obstacle placements as hollow outlines.
    if let Some(finals) = doc.get("final_obstacles").and_then(|v| v.as_array()) {
        for p in finals {
            let (x, y) = (
                p[0].as_f64().ok_or_else(|| anyhow!("final_obstacles: bad x"))?,
                p[1].as_f64().ok_or_else(|| anyhow!("final_obstacles: bad y"))?,
            );
            canvas.circle(
                &Point2::new(x, y),
                scene.config.ws.object_radius,
                r##"fill="none" stroke="#777" stroke-width="1.5" stroke-dasharray="4,3""##,
            );
        }
    }

    let actions = doc
        .get("actions")
        .and_then(|v| v.as_array())
        .ok_or_else(|| anyhow!("plan document has no actions array"))?;
    for action in actions {
        let get = |k: &str| {
            action
                .get(k)
                .and_then(|v| v.as_f64())
                .ok_or_else(|| anyhow!("action field {k} missing"))
        };
        let phi = get("frame_angle")?;
        let swath_lo = action["swath"][0]
            .as_f64()
            .ok_or_else(|| anyhow!("swath lo"))?;
        let swath_hi = action["swath"][1]
            .as_f64()
            .ok_or_else(|| anyhow!("swath hi"))?;
        let mid = 0.5 * (swath_lo + swath_hi);
        let start = rotate(&Point2::new(mid, get("front_start")?), phi);
        let stop = rotate(&Point2::new(mid, get("front_stop")?), phi);
        // Swept slab outline.
        let fs = get("front_start")?;
        let fe = get("front_stop")?;
        let slab = [
            rotate(&Point2::new(swath_lo, fs), phi),
            rotate(&Point2::new(swath_hi, fs), phi),
            rotate(&Point2::new(swath_hi, fe), phi),
            rotate(&Point2::new(swath_lo, fe), phi),
        ];
        canvas.polygon(
            &slab,
            r##"fill="none" stroke="#888" stroke-width="1" stroke-dasharray="3,3""##,
        );
        canvas.line(
            &start,
            &stop,
            r##"stroke="#333" stroke-width="2.5" marker-end="url(#arrow)""##,
        );
        let idx = action["index"].as_u64().unwrap_or(0);
        canvas.text(&start, 6.0, -6.0, 13.0, &format!("{}", idx + 1));
    }
    Ok(canvas.finish())
}
