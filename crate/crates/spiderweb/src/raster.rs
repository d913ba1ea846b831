use rayon::prelude::*;
use spiderweb_core::dynamics::{raster_row, ClassGrid, Thresholds, Window};
use spiderweb_core::{EntireProductFunction, Error, Result};

/// `dynamics::raster` with rows computed on a pool of `threads` workers
/// (`0` = rayon's default). Rows are collected in order, so the grid does
/// not depend on the thread count.
pub fn raster_parallel(
    f: &EntireProductFunction,
    window: Window,
    width: usize,
    height: usize,
    th: &Thresholds,
    threads: usize,
) -> Result<ClassGrid> {
    if width < 16 || height < 16 {
        return Err(Error::InvalidArgument(
            "resolution must be at least 16×16".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let rows: Vec<_> = pool.install(|| {
        (0..height)
            .into_par_iter()
            .map(|row| raster_row(f, window, width, height, row, th))
            .collect()
    });
    Ok(ClassGrid {
        window,
        width,
        height,
        cells: rows.concat(),
    })
}
