use std::fs;
use std::io::Write;
use std::path::Path;

use grayfilter_core::Image;
use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::pgm::{read_pgm, write_pgm, PgmFormat};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(io_err(path))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

pub fn load_image(path: &Path) -> Result<Image> {
    let bytes = read_bytes(path)?;
    read_pgm(&bytes).map_err(|source| Error::Pgm {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a temporary file in the destination directory, then
/// renames it over `path`; readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

pub fn save_image(path: &Path, img: &Image, format: PgmFormat) -> Result<()> {
    write_atomic(path, &write_pgm(img, format))
}
