use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use molspace::budget::Budget;
use molspace::catalog::{catalog, NAMES};
use molspace::charfn::{coefficients_from_base, CharFunction};
use molspace::construct;
use molspace::digitize::{self, Cover, ImplicitRegion};
use molspace::dim;
use molspace::euler::{self, TileCount, TilingQuery};
use molspace::homology::homology_limited;
use molspace::io::{parse_graph, to_edgelist, to_json};
use molspace::lattice::{self, CoordinateMatrix, LatticeKind, LatticeModel};
use molspace::pde::{self, Kind, PdeConfig};
use molspace::transform::{homotopy_check, is_contractible, minimize};
use molspace::{Error, MolecularSpace, Result, VertexId};

#[derive(Parser)]
#[command(name = "molspace", version, about = "Molecular spaces: graphs as digital models of continuous spaces")]
struct Cli {
    /// Output format for emitted graphs and tables.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Search step budget (default 5000000, or MOLSPACE_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Edgelist,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Volume, weight, components, f-vector, Euler characteristic, homology.
    Info { graph: String },
    /// Integer homology of the clique complex.
    Homology { graph: String },
    /// Minimize by contractible moves; prints the result and the move trace.
    Reduce { graph: String },
    /// Compare two spaces up to contractible transformations.
    Homotopy { a: String, b: String },
    /// Normality, sphere, manifold, boundary and dimension verdicts.
    Classify { graph: String },
    /// Build a space.
    #[command(subcommand)]
    Make(Make),
    /// Coordinate matrices.
    #[command(subcommand)]
    Coords(Coords),
    /// Covers given as JSON {"graph": <graph or reference>, "parts": [[ids]]}.
    Cover {
        #[arg(value_enum)]
        action: CoverAction,
        file: PathBuf,
    },
    /// Cube-grid digitization of a planar or spatial set.
    Digitize(DigitizeArgs),
    /// Discrete dynamics from a JSON config.
    #[command(subcommand)]
    Pde(Pde),
    /// Characteristic function coefficients and evaluations.
    Charfn(CharfnArgs),
    /// Homogeneous (or two-type) tilings of a closed surface by Euler characteristic.
    Tilings {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, default_value_t = 1)]
        min_volume: u64,
        /// 1 or 2 tile types.
        #[arg(long, default_value_t = 1)]
        types: usize,
        #[arg(long, default_value_t = 12)]
        m_max: u32,
    },
}

#[derive(Subcommand)]
enum Make {
    Catalog {
        /// Entry such as `torus16` or `circle(6)`; omit to list names.
        name: Option<String>,
    },
    Cycle { n: usize },
    Path { n: usize },
    Join { a: String, b: String },
    Product { a: String, b: String },
    /// Strong product with one diagonal of each square removed.
    Nob { a: String, b: String },
    Cone { graph: String },
    Suspension { graph: String },
    /// Minimal n-sphere K(2,...,2).
    Sphere { n: usize },
    /// Complete multipartite space, e.g. `2,3,3`.
    Partite {
        #[arg(value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Replace point i by a clique of sizes[i] points.
    Block {
        graph: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Window of the lattice model L, R or N.
    Lattice {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_delimiter = ',')]
        extents: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        origin: Option<Vec<i64>>,
    },
    /// Structural block J(n).
    Jblock { n: usize },
    /// Diagonal D(n) of J(n).
    Diagonal { n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    L,
    R,
    N,
}

#[derive(Subcommand)]
enum Coords {
    /// Graph to coordinate CSV.
    Encode { graph: String },
    /// Coordinate CSV to graph.
    Decode { csv: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverAction {
    Check,
    Nerve,
    Blowup,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Circle,
    Disk,
    Sphere,
    Ball,
    Box,
    Annulus,
    Expr,
}

#[derive(Args)]
struct DigitizeArgs {
    #[arg(long, value_enum)]
    shape: Shape,
    /// Radius (outer radius for the annulus).
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Inner radius of the annulus.
    #[arg(long, default_value_t = 0.5)]
    inner: f64,
    /// Box or expression bounds.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lo: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hi: Option<Vec<f64>>,
    /// Boolean expression in x, y, z, e.g. "x^2 + y^2 <= 1".
    #[arg(long)]
    expr: Option<String>,
    /// Dimension for ball and sphere.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Cube side.
    #[arg(long)]
    l0: f64,
    /// Number of halvings for --multires.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long)]
    multires: bool,
    /// Samples per axis per cube for expression regions.
    #[arg(long, default_value_t = 4)]
    sampling: usize,
    /// Also write the coordinate CSV here.
    #[arg(long)]
    coords: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Pde {
    /// Run (or solve, for elliptic configs) and print the layers as CSV.
    Run {
        config: PathBuf,
        /// Exact rational arithmetic.
        #[arg(long)]
        rational: bool,
    },
    /// Admissibility and nondegeneracy report.
    Check { config: PathBuf },
}

#[derive(Args)]
struct CharfnArgs {
    #[arg(long)]
    base: String,
    /// Free coefficients a1[,a2...], one per clique size of the base.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    seed: Vec<String>,
    /// Spaces to evaluate on.
    #[arg(long)]
    eval: Vec<String>,
    #[arg(long, default_value_t = 8)]
    terms: usize,
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::from_env();
    if let Some(n) = cli.budget {
        b.max_steps = n;
    }
    b
}

/// `catalog:NAME`, `-` for stdin, or a file path (relative to `dir`).
fn load_graph_in(r: &str, dir: Option<&Path>) -> Result<MolecularSpace> {
    if let Some(name) = r.strip_prefix("catalog:") {
        return Ok(catalog(name)?.space);
    }
    let text = if r == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        let p = match dir {
            Some(d) if Path::new(r).is_relative() => d.join(r),
            _ => PathBuf::from(r),
        };
        std::fs::read_to_string(&p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
    };
    parse_graph(&text)
}

fn load_graph(r: &str) -> Result<MolecularSpace> {
    load_graph_in(r, None)
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn emit_graph(g: &MolecularSpace, f: Option<Format>) -> Result<String> {
    match f {
        None | Some(Format::Json) => Ok(to_json(g)),
        Some(Format::Edgelist) => Ok(to_edgelist(g)),
        Some(Format::Csv) => lattice::coords_from_space(g).to_csv(),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn rational(s: &str) -> Result<BigRational> {
    pde::parse_decimal(s)
}

fn info(g: &MolecularSpace, b: &Budget) -> Result<Value> {
    let f = euler::f_vector_limited(g, b.clique_limit)?;
    let h = homology_limited(g, None, b.clique_limit)?;
    Ok(json!({
        "volume": g.volume(),
        "weight": g.weight(),
        "components": g.component_indices().len(),
        "f_vector": f.counts,
        "euler": f.euler(),
        "betti": h.betti_trimmed(),
        "torsion": (0..h.groups.len()).map(|d| h.torsion(d)).collect::<Vec<_>>(),
        "homology": h.groups.iter().enumerate().map(|(d, g)| format!("H{d} = {g}")).collect::<Vec<_>>(),
    }))
}

fn classify(g: &MolecularSpace, b: &Budget) -> Value {
    json!({
        "contractible": is_contractible(g, b),
        "normal_closed": dim::is_normal_closed(g),
        "sphere": dim::is_sphere(g, b),
        "manifold": dim::is_manifold(g, b),
        "boundary": dim::boundary_decomposition(g),
        "dimension": dim::space_dimension(g, b),
        "minimal": dim::is_minimal(g, b),
    })
}

#[derive(Deserialize)]
struct CoverFile {
    graph: Value,
    parts: Vec<Vec<u32>>,
}

fn load_cover(p: &Path) -> Result<Cover> {
    let cf: CoverFile = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
    let g = match &cf.graph {
        Value::String(r) => load_graph_in(r, p.parent())?,
        v => serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?,
    };
    Cover::new(g, cf.parts.into_iter().map(|p| p.into_iter().map(VertexId).collect()).collect())
}

fn region(a: &DigitizeArgs) -> Result<ImplicitRegion> {
    let bounds = || -> Result<(Vec<f64>, Vec<f64>)> {
        match (&a.lo, &a.hi) {
            (Some(l), Some(h)) => Ok((l.clone(), h.clone())),
            _ => Err(Error::InvalidArgument("--lo and --hi are required for this shape".into())),
        }
    };
    Ok(match a.shape {
        Shape::Circle => ImplicitRegion::circle(a.radius),
        Shape::Disk => ImplicitRegion::ball(2, a.radius),
        Shape::Sphere => ImplicitRegion::sphere(a.dim.max(2), a.radius),
        Shape::Ball => ImplicitRegion::ball(a.dim.max(1), a.radius),
        Shape::Annulus => ImplicitRegion::annulus(a.inner, a.radius),
        Shape::Box => {
            let (l, h) = bounds()?;
            ImplicitRegion::block(l, h)?
        }
        Shape::Expr => {
            let (l, h) = bounds()?;
            let e = a.expr.as_deref().ok_or_else(|| Error::InvalidArgument("--expr is required".into()))?;
            ImplicitRegion::from_expr(e, l, h)?.with_sampling(a.sampling)
        }
    })
}

fn tilings_table(sols: &[euler::TilingSolution], f: Option<Format>) -> String {
    let count = |c: &TileCount| match c {
        TileCount::Exact(n) => n.to_string(),
        TileCount::AtLeast(n) => format!(">={n}"),
    };
    match f {
        Some(Format::Json) => pretty(&sols),
        Some(Format::Csv) => {
            let mut s = String::from("solution,m,t\n");
            for (i, sol) in sols.iter().enumerate() {
                for (m, c) in &sol.tiles {
                    s.push_str(&format!("{},{},{}\n", i + 1, m, count(c)));
                }
            }
            s
        }
        _ => {
            if sols.is_empty() {
                return "no solutions".into();
            }
            sols.iter()
                .map(|sol| sol.tiles.iter().map(|(m, c)| format!("({m},{})", count(c))).collect::<Vec<_>>().join(" + "))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let b = budget(cli);
    let fmt = cli.format;
    Ok(match &cli.cmd {
        Cmd::Info { graph } => pretty(&info(&load_graph(graph)?, &b)?),
        Cmd::Homology { graph } => {
            let h = homology_limited(&load_graph(graph)?, None, b.clique_limit)?;
            match fmt {
                Some(Format::Json) => pretty(&h),
                _ => h.render(),
            }
        }
        Cmd::Reduce { graph } => {
            let m = minimize(&load_graph(graph)?, &b);
            match fmt {
                Some(Format::Edgelist) => to_edgelist(&m.space),
                _ => pretty(&m),
            }
        }
        Cmd::Homotopy { a, b: other } => pretty(&homotopy_check(&load_graph(a)?, &load_graph(other)?, &b)),
        Cmd::Classify { graph } => pretty(&classify(&load_graph(graph)?, &b)),
        Cmd::Make(m) => {
            let g = match m {
                Make::Catalog { name: None } => return Ok(NAMES.join("\n")),
                Make::Catalog { name: Some(n) } => catalog(n)?.space,
                Make::Cycle { n } => construct::cycle(*n),
                Make::Path { n } => construct::path(*n),
                Make::Join { a, b } => construct::join(&load_graph(a)?, &load_graph(b)?),
                Make::Product { a, b } => construct::strong_product(&load_graph(a)?, &load_graph(b)?),
                Make::Nob { a, b: other } => construct::nob_normalize(&load_graph(a)?, &load_graph(other)?, &b)?.space,
                Make::Cone { graph } => construct::cone(&load_graph(graph)?),
                Make::Suspension { graph } => construct::suspension(&load_graph(graph)?),
                Make::Sphere { n } => construct::minimal_sphere(*n),
                Make::Partite { sizes } => construct::partite(sizes),
                Make::Block { graph, sizes } => construct::block_space(&load_graph(graph)?, sizes)?,
                Make::Lattice { kind, extents, origin } => {
                    let kind = match kind {
                        KindArg::L => LatticeKind::L,
                        KindArg::R => LatticeKind::R,
                        KindArg::N => LatticeKind::N,
                    };
                    let mut model = LatticeModel::new(kind, extents.clone());
                    if let Some(o) = origin {
                        if o.len() != extents.len() {
                            return Err(Error::InvalidArgument("origin and extents differ in length".into()));
                        }
                        model.origin = o.clone();
                    }
                    lattice::lattice_window(&model)
                }
                Make::Jblock { n } => lattice::structural_block(*n),
                Make::Diagonal { n } => lattice::diagonal(*n),
            };
            emit_graph(&g, fmt)?
        }
        Cmd::Coords(Coords::Encode { graph }) => lattice::coords_from_space(&load_graph(graph)?).to_csv()?,
        Cmd::Coords(Coords::Decode { csv }) => {
            let m = CoordinateMatrix::from_csv(&read(csv)?)?;
            emit_graph(&lattice::space_from_coords(&m)?, fmt)?
        }
        Cmd::Cover { action, file } => {
            let c = load_cover(file)?;
            match action {
                CoverAction::Check => pretty(&digitize::cover_is_complete(&c, &b)),
                CoverAction::Nerve => emit_graph(&digitize::nerve(&c), fmt)?,
                CoverAction::Blowup => emit_graph(&digitize::blowup(&c), fmt)?,
            }
        }
        Cmd::Digitize(a) => {
            let r = region(a)?;
            if a.multires {
                let m = digitize::multires_digitize(&r, a.l0, a.levels, &b)?;
                if let Some(p) = &a.coords {
                    std::fs::write(p, m.last.coords.to_csv()?).map_err(|e| Error::Parse(e.to_string()))?;
                }
                pretty(&json!({
                    "stabilized_at": m.stabilized_at,
                    "weak_stabilization": m.weak_stabilization,
                    "levels": m.levels,
                    "space": m.last.space,
                }))
            } else {
                let d = digitize::digitize(&r, a.l0)?;
                if let Some(p) = &a.coords {
                    std::fs::write(p, d.coords.to_csv()?).map_err(|e| Error::Parse(e.to_string()))?;
                }
                match fmt {
                    Some(Format::Csv) => d.coords.to_csv()?,
                    f => emit_graph(&d.space, f)?,
                }
            }
        }
        Cmd::Pde(p) => {
            let path = match p {
                Pde::Run { config, .. } | Pde::Check { config } => config,
            };
            let cfg: PdeConfig = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
            let g = load_space_ref(&cfg.space, path.parent())?;
            let t0 = if cfg.kind == Kind::Hyperbolic { 1 - cfg.initial.len() as i64 } else { 0 };
            match p {
                Pde::Run { rational: true, .. } if cfg.kind != Kind::Elliptic => {
                    let mut sys = cfg.build::<BigRational>(&g)?;
                    sys.run(cfg.steps)?;
                    sys.to_csv(t0)?
                }
                Pde::Run { .. } => {
                    let mut sys = cfg.build::<f64>(&g)?;
                    if cfg.kind == Kind::Elliptic {
                        let sol = sys.solve_elliptic(cfg.tol.unwrap_or(1e-10), cfg.max_iter.unwrap_or(100_000))?;
                        pretty(&sol)
                    } else {
                        sys.run(cfg.steps)?;
                        sys.to_csv(t0)?
                    }
                }
                Pde::Check { .. } => {
                    let sys = cfg.build::<f64>(&g)?;
                    let adm = match sys.admissibility() {
                        Ok(bal) => json!({"admissible": true, "balance": bal}),
                        Err(e) => json!({"admissible": false, "reason": e.to_string()}),
                    };
                    pretty(&json!({"admissibility": adm, "nondegenerate": pde::is_nondegenerate(&sys.stencil)}))
                }
            }
        }
        Cmd::Charfn(a) => {
            let base = load_graph(&a.base)?;
            let seeds = a.seed.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()?;
            let f: CharFunction = coefficients_from_base(&base, &seeds)?;
            let coeffs = f.coeffs(a.terms);
            let mut evals = Vec::new();
            for e in &a.eval {
                evals.push((e.clone(), f.evaluate(&load_graph(e)?)?));
            }
            match fmt {
                Some(Format::Json) => pretty(&json!({
                    "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "base_value": f.evaluate(&base)?.to_string(),
                    "evaluations": evals.iter().map(|(n, v)| json!({"space": n, "value": v.to_string()})).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut s = String::from("k,a_k\n");
                    for (k, c) in coeffs.iter().enumerate() {
                        s.push_str(&format!("{},{}\n", k + 1, c));
                    }
                    s.push_str(&format!("F(base) = {}\n", f.evaluate(&base)?));
                    for (n, v) in &evals {
                        s.push_str(&format!("F({n}) = {v}\n"));
                    }
                    s
                }
            }
        }
        Cmd::Tilings { chi, min_volume, types, m_max } => {
            let mut q = TilingQuery::new(*chi, *min_volume);
            q.max_types = *types;
            q.m_max = *m_max;
            tilings_table(&euler::tiling_solutions(&q)?, fmt)
        }
    })
}

/// PDE configs name their space like any graph argument; `octahedron`
/// is the labelled octahedron with points 1..6.
fn load_space_ref(r: &str, dir: Option<&Path>) -> Result<MolecularSpace> {
    if r == "octahedron" {
        return Ok(pde::labelled_octahedron());
    }
    load_graph_in(r, dir)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // a closed pipe (`| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
