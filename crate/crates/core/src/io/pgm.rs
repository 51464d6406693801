use std::fs;
use std::path::{Path, PathBuf};

use super::IoError;
use crate::fem::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmFormat {
    /// `P5`, one byte per pixel.
    #[default]
    Binary,
    /// `P2`, decimal text.
    Ascii,
}

/// A decoded 8-bit graymap, row-major from the top row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graymap {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u8>,
}

/// `round(255 (1 − ρ))`: solid is black, void is white.
pub fn gray_level(rho: f64) -> u8 {
    (255.0 * (1.0 - rho.clamp(0.0, 1.0))).round() as u8
}

/// Pixels of one z-layer: width `nelx`, height `nely`, top row first.
pub fn density_pixels(rho: &[f64], mesh: &Mesh, layer: usize) -> Vec<u8> {
    let (nelx, nely) = (mesh.nelx(), mesh.nely());
    let mut px = Vec::with_capacity(nelx * nely);
    for ely in 0..nely {
        for elx in 0..nelx {
            let e = if mesh.spatial_dim() == 3 { mesh.element_3d(elx, ely, layer) } else { mesh.element_2d(elx, ely) };
            px.push(gray_level(rho[e]));
        }
    }
    px
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8], format: PgmFormat) -> Vec<u8> {
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
            out.extend_from_slice(pixels);
            out
        }
        PgmFormat::Ascii => {
            let mut out = format!("P2\n{width} {height}\n255\n");
            for row in pixels.chunks(width.max(1)) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Writes the density as a graymap. A 3-D mesh gives one file per z-layer,
/// named `<stem>_z<k>.pgm` next to `path`. Returns the files written.
pub fn write_density_pgm(
    rho: &[f64],
    mesh: &Mesh,
    path: &Path,
    format: PgmFormat,
) -> Result<Vec<PathBuf>, IoError> {
    if rho.len() != mesh.n_elements() {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            reason: format!("{} densities for {} elements", rho.len(), mesh.n_elements()),
        });
    }
    let targets: Vec<(usize, PathBuf)> = if mesh.spatial_dim() == 3 {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("density");
        (0..mesh.nelz()).map(|k| (k, path.with_file_name(format!("{stem}_z{k}.pgm")))).collect()
    } else {
        vec![(0, path.to_path_buf())]
    };
    for (layer, target) in &targets {
        let bytes = encode_pgm(mesh.nelx(), mesh.nely(), &density_pixels(rho, mesh, *layer), format);
        fs::write(target, bytes).map_err(|source| IoError::Io { path: target.clone(), source })?;
    }
    Ok(targets.into_iter().map(|(_, p)| p).collect())
}

/// Parses `P5` or `P2` with `maxval ≤ 255`; `#` comments in the header are
/// skipped.
pub fn decode_pgm(bytes: &[u8]) -> Result<Graymap, String> {
    let mut pos = 0;
    let mut token = || -> Result<String, String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("unexpected end of header".into());
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    let magic = token()?;
    let num = |s: String| s.parse::<usize>().map_err(|_| format!("bad header number `{s}`"));
    let width = num(token()?)?;
    let height = num(token()?)?;
    let maxval = num(token()?)?;
    if maxval == 0 || maxval > 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    let count = width * height;
    let pixels = match magic.as_str() {
        "P5" => {
            // exactly one whitespace byte separates the header from the raster
            let start = pos + 1;
            let raster = bytes.get(start..start + count).ok_or("raster shorter than width × height")?;
            raster.to_vec()
        }
        "P2" => {
            let text = String::from_utf8_lossy(&bytes[pos..]);
            let px: Result<Vec<u8>, String> = text
                .split_ascii_whitespace()
                .map(|t| t.parse::<u8>().map_err(|_| format!("bad pixel `{t}`")))
                .collect();
            let px = px?;
            if px.len() != count {
                return Err(format!("expected {count} pixels, found {}", px.len()));
            }
            px
        }
        other => return Err(format!("unknown magic `{other}`")),
    };
    Ok(Graymap { width, height, maxval: maxval as u16, pixels })
}

pub fn read_pgm(path: &Path) -> Result<Graymap, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })?;
    decode_pgm(&bytes).map_err(|reason| IoError::Format { path: path.to_path_buf(), reason })
}
