use std::collections::BTreeMap;
use std::fs::File;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::Args;
use numwall::ff::PrimeField;
use numwall::render::{render_ppm, render_ppm_tiled};
use numwall::seq::{laurent_substitute, Poly, SeqError};
use numwall::tiling::{
    algorithm_1_1, algorithm_1_2, checkpoint_load, checkpoint_save, Morphism2DResult, RunStatus,
    TileStore, TilingError,
};
use numwall::verify::{enumerate_four_tuples, verify_four_tuples};
use numwall::wall::{
    find_windows, generate_wall, lc_quality, oracle_wall, scan_window_search, WallError, WallGrid,
};

use crate::source::{field, Source};
use crate::{Usage, EXIT_FAIL, EXIT_USAGE, EXIT_WINDOW_TOO_LARGE};

#[derive(Debug, Args)]
pub struct WallArgs {
    /// pf1, pf2, thue-morse, random:seed=<s>, or a spec file.
    #[arg(long)]
    seq: String,
    #[arg(long)]
    p: u32,
    /// Number of sequence terms.
    #[arg(long)]
    len: usize,
    /// Use determinants instead of the frame constraints. Slow.
    #[arg(long)]
    oracle: bool,
    /// Write the wall as text, one row per line.
    #[arg(long, value_name = "PATH")]
    dump: Option<PathBuf>,
    /// Write a PPM image.
    #[arg(long, value_name = "PATH")]
    render: Option<PathBuf>,
    /// Shade tiles of this length in the image.
    #[arg(long, value_name = "2K", requires = "render")]
    tiles: Option<usize>,
}

pub fn wall(a: WallArgs) -> anyhow::Result<u8> {
    let f = field(a.p)?;
    let source = Source::parse(&a.seq)?;
    let s = source.prefix(&f, a.len);
    let grid = if a.oracle {
        oracle_wall(&s, &f)
    } else {
        generate_wall(&s, &f)
    };
    if let Some(path) = &a.dump {
        std::fs::write(path, grid.to_dump())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &a.render {
        write_image(&grid, a.tiles, path)?;
    }
    let q = lc_quality(&grid)?;
    let windows = find_windows(&grid)?;
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    let mut clipped = 0;
    for w in &windows {
        if w.clipped {
            clipped += 1;
        } else {
            *census.entry(w.side).or_default() += 1;
        }
    }
    say!(
        "seq={} p={} len={} depth={} max_side={} unbounded={} windows={} clipped={} engine={}",
        source.label(),
        a.p,
        a.len,
        grid.depth(),
        q.max_side,
        q.unbounded,
        windows.len(),
        clipped,
        if a.oracle { "oracle" } else { "frame" }
    );
    for (side, count) in &census {
        say!("side {side}: {count}");
    }
    if clipped > 0 {
        say!("{clipped} windows touch the edge of the triangle; their sides are lower bounds");
    }
    Ok(0)
}

fn write_image(grid: &WallGrid, tiles: Option<usize>, path: &Path) -> anyhow::Result<()> {
    let out = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    match tiles {
        Some(t) => render_ppm_tiled(grid, t, out)?,
        None => render_ppm(grid, out)?,
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct TileArgs {
    /// pf1, pf2, thue-morse, or a spec file.
    #[arg(long)]
    seq: String,
    #[arg(long)]
    p: u32,
    /// Length of the middle row of a tile. Defaults to 16 for pf2, 8 otherwise.
    #[arg(long, value_name = "2K")]
    tile_length: Option<usize>,
    /// Save the tile store here, periodically and at the end.
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint instead of starting over.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Tiles processed between checkpoints.
    #[arg(long, default_value_t = 1_000_000)]
    checkpoint_every: usize,
    /// Tiles processed between progress lines on standard error.
    #[arg(long, default_value_t = 100_000)]
    progress_every: usize,
    /// Stop after this many tiles have been found, leaving the run resumable.
    #[arg(long)]
    max_tiles: Option<usize>,
}

fn initial_store(a: &TileArgs, f: &PrimeField, tile_length: usize) -> anyhow::Result<TileStore> {
    let source = Source::parse(&a.seq)?;
    let fresh = match algorithm_1_1(source.spec()?, f, tile_length) {
        Err(
            e @ (TilingError::BadTileLength(_)
            | TilingError::NotTwoMorphism(_)
            | TilingError::CodingMismatch { .. }),
        ) => return Err(Usage(e.to_string()).into()),
        other => other?,
    };
    let path = match (&a.checkpoint, a.resume) {
        (Some(path), true) if path.exists() => path,
        _ => return Ok(fresh),
    };
    let store = checkpoint_load(path).with_context(|| format!("loading {}", path.display()))?;
    if store.field().modulus() != f.modulus() || store.shape() != fresh.shape() {
        bail!(Usage(format!(
            "{} holds p={} tile_length={}, not p={} tile_length={tile_length}",
            path.display(),
            store.field().modulus(),
            store.shape().tile_length(),
            f.modulus()
        )));
    }
    let same_start = store.len() >= fresh.len()
        && store.start() == fresh.start()
        && (0..fresh.len() as u32).all(|id| store.value(id) == fresh.value(id));
    if !same_start {
        bail!(Usage(format!(
            "{} was made from a different sequence",
            path.display()
        )));
    }
    eprintln!(
        "resuming from {} with {} tiles",
        path.display(),
        store.len()
    );
    Ok(store)
}

fn save(store: &TileStore, path: Option<&PathBuf>) -> anyhow::Result<()> {
    if let Some(path) = path {
        checkpoint_save(store, path).with_context(|| format!("saving {}", path.display()))?;
    }
    Ok(())
}

pub fn tile(a: TileArgs) -> anyhow::Result<u8> {
    let f = field(a.p)?;
    let tile_length = a.tile_length.unwrap_or(if a.seq == "pf2" { 16 } else { 8 });
    let mut store = initial_store(&a, &f, tile_length)?;
    let started = Instant::now();
    let every = a.progress_every.clamp(1, a.checkpoint_every.max(1));
    let mut since_save = 0usize;
    let max_tiles = a.max_tiles.unwrap_or(usize::MAX);
    let run = algorithm_1_2(&mut store, every, |s| {
        eprintln!(
            "tiles={} frontier={} mem_mb={} elapsed_s={:.1}",
            s.len(),
            s.frontier_len(),
            s.approx_bytes() >> 20,
            started.elapsed().as_secs_f64()
        );
        since_save += every;
        if since_save >= a.checkpoint_every {
            since_save = 0;
            if let Err(e) = save(s, a.checkpoint.as_ref()) {
                eprintln!("warning: {e:#}");
            }
        }
        if s.len() >= max_tiles {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let head = format!(
        "p={} tile_length={tile_length} frontier={}",
        a.p,
        store.frontier_len()
    );
    let code = match run {
        Ok(RunStatus::Closed) => {
            say!("tiles={} status=closed {head}", store.len());
            0
        }
        Ok(RunStatus::Stopped) => {
            say!("tiles={} status=stopped {head}", store.len());
            say!("stopped at the tile limit; rerun with --resume to continue");
            0
        }
        Err(TilingError::WindowTooLarge { tile, source }) => {
            say!(
                "tiles={} status=window-too-large {head} tile={tile}",
                store.len()
            );
            say!("the children of tile {tile} depend on entries outside its scaffolding: {source}");
            say!("the windows of this wall are unbounded, or tiles of length {tile_length} are too short");
            EXIT_WINDOW_TOO_LARGE
        }
        Err(e) => {
            save(&store, a.checkpoint.as_ref())?;
            return Err(e.into());
        }
    };
    save(&store, a.checkpoint.as_ref())?;
    Ok(code)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A checkpoint written by `tile` after closure.
    #[arg(long, value_name = "PATH")]
    checkpoint: PathBuf,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
}

pub fn verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let store = checkpoint_load(&a.checkpoint)
        .with_context(|| format!("loading {}", a.checkpoint.display()))?;
    let result = match Morphism2DResult::new(store) {
        Ok(r) => r,
        Err(TilingError::Incomplete(id)) => bail!(Usage(format!(
            "tile {id} has no images yet; run `tile --resume` to closure first"
        ))),
        Err(e) => return Err(e.into()),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let started = Instant::now();
    let report = pool.install(|| {
        let tuples = enumerate_four_tuples(&result);
        eprintln!(
            "{} tuples found in {:.1}s",
            tuples.len(),
            started.elapsed().as_secs_f64()
        );
        verify_four_tuples(&result, &tuples)
    });
    say!("{}", report.summary_line());
    let Some(failure) = &report.failure else {
        say!(
            "every tuple's south tile agrees with the frame constraints ({} checked, {:.1}s)",
            report.verified,
            started.elapsed().as_secs_f64()
        );
        return Ok(0);
    };
    say!("tuple {} fails: {}", failure.index, failure.tuple);
    say!("stored south:   {}", digits(&failure.stored));
    match &failure.computed {
        Some(c) => say!("computed south: {}", digits(c)),
        None => say!("the south tile could not be computed from the other three"),
    }
    Ok(EXIT_FAIL)
}

fn digits(v: &[u8]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("")
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    p: u32,
    /// Longest sequence length to try.
    #[arg(long)]
    max_len: usize,
    /// Window side to look for.
    #[arg(long)]
    window: usize,
    /// Refuse to start if p^max-len exceeds this.
    #[arg(long, default_value_t = 1 << 32)]
    budget: u128,
}

pub fn search(a: SearchArgs) -> anyhow::Result<u8> {
    let f = field(a.p)?;
    let head = format!("p={} window={} max_len={}", a.p, a.window, a.max_len);
    let scan = match scan_window_search(&f, a.max_len, a.window, a.budget) {
        Ok(s) => s,
        Err(WallError::BudgetExceeded { needed, budget }) => {
            say!("{head} status=budget-exceeded needed={needed} budget={budget}");
            say!(
                "{}^{} sequences cannot be searched exhaustively within the budget; raise --budget or lower --max-len",
                a.p, a.max_len
            );
            return Ok(EXIT_USAGE);
        }
        Err(e) => return Err(e.into()),
    };
    match scan.min_len {
        Some(l) => say!("{head} min_len={l}"),
        None => say!("{head} min_len=none"),
    }
    if let Some(w) = &scan.last_witness {
        say!("witness len={} seq={}", w.len(), digits(w));
    }
    if let Some(l) = scan.min_len {
        say!(
            "every sequence of length {l} over F_{} has a window of side {} or more",
            a.p,
            a.window
        );
    }
    Ok(0)
}

#[derive(Debug, Args)]
pub struct SubstArgs {
    /// pf1, pf2, thue-morse, random:seed=<s>, or a spec file.
    #[arg(long)]
    seq: String,
    #[arg(long)]
    p: u32,
    /// Coefficients of p(t), constant term first, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Number of coefficients to print.
    #[arg(long)]
    len: usize,
}

pub fn subst(a: SubstArgs) -> anyhow::Result<u8> {
    let f = field(a.p)?;
    let source = Source::parse(&a.seq)?;
    let coeffs = a
        .poly
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            Usage(format!(
                "--poly expects comma separated integers, got `{}`",
                a.poly
            ))
        })?;
    let poly = Poly::new(&f, &coeffs).map_err(|e| Usage(e.to_string()))?;
    if poly.degree() == 0 {
        bail!(Usage(SeqError::DegreeZero.to_string()));
    }
    let terms = source.prefix(&f, a.len / poly.degree());
    let out = laurent_substitute(&f, &terms, &poly, a.len).map_err(|e| Usage(e.to_string()))?;
    let poly_text = poly
        .coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let out_text = out
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    say!(
        "seq={} p={} poly={poly_text} len={} coeffs={out_text}",
        source.label(),
        a.p,
        a.len
    );
    Ok(0)
}
