//! Ordered filter chains.
//!
//! A [`PipelineSpec`] is the JSON document
//! `{"stages":[{"op":"negate"},{"op":"unsharp","radius":1}]}`. It is
//! resolved into [`Op`]s up front (files loaded, every parameter checked) so
//! a bad stage is reported before any pixel is touched.

use std::path::{Path, PathBuf};

use grayfilter_core::conv::convolve_with;
use grayfilter_core::edge::{
    binarize_with, edge_points_with, image_add_with, shadow_invert_with, shadow_ne_with,
};
use grayfilter_core::enhance::{laplacian_sharpen_with, unsharp_mask_with, validate_radius};
use grayfilter_core::point::{apply_lut_with, negate_with, DEFAULT_GAMMA};
use grayfilter_core::conv::{clamp_to_display_with, laplacian_with};
use grayfilter_core::{
    render_binary, BorderPolicy, DisplayMode, Executor, Image, Kernel, LaplacianVariant, Lut, Serial, Threshold,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsio::{load_image, read_text};
use crate::text::parse_kernel;

/// Serializes enums through their `Display`/`FromStr` names.
mod named {
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn default_radius() -> usize {
    grayfilter_core::enhance::DEFAULT_RADIUS
}

fn default_threshold() -> u8 {
    Threshold::default().0
}

/// One stage as written in the JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum Stage {
    Negate {},
    Stretch {
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    /// Inline table of 256 gray levels.
    Lut { table: Vec<u8> },
    Laplacian {
        #[serde(default, with = "named")]
        variant: LaplacianVariant,
        #[serde(default, with = "named")]
        display: DisplayMode,
        #[serde(default, with = "named")]
        border: BorderPolicy,
    },
    Sharpen {
        #[serde(default, with = "named")]
        variant: LaplacianVariant,
        #[serde(default, with = "named")]
        border: BorderPolicy,
    },
    Unsharp {
        #[serde(default = "default_radius")]
        radius: usize,
        #[serde(default, with = "named")]
        display: DisplayMode,
        #[serde(default, with = "named")]
        border: BorderPolicy,
    },
    /// Exactly one of `kernel` (inline rows) or `kernel_file` is required.
    Convolve {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kernel: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kernel_file: Option<PathBuf>,
        #[serde(default, with = "named")]
        border: BorderPolicy,
        #[serde(default, with = "named")]
        display: DisplayMode,
    },
    Binarize {
        #[serde(default = "default_threshold")]
        threshold: u8,
    },
    Edges {
        #[serde(default = "default_threshold")]
        threshold: u8,
    },
    /// Adds the pipeline's input image, or `file` if given.
    Add {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<PathBuf>,
    },
    Shadow {
        #[serde(default)]
        invert: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub stages: Vec<Stage>,
}

/// Second operand of an addition.
#[derive(Clone, Debug, PartialEq)]
pub enum Addend {
    /// The image the pipeline (or command) started from.
    Original,
    Image(Image),
}

/// A fully validated image-to-image operation.
#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Negate,
    Stretch(Lut),
    Lut(Lut),
    Laplacian {
        variant: LaplacianVariant,
        display: DisplayMode,
        border: BorderPolicy,
    },
    Sharpen {
        variant: LaplacianVariant,
        border: BorderPolicy,
    },
    Unsharp {
        radius: usize,
        display: DisplayMode,
        border: BorderPolicy,
    },
    Convolve {
        kernel: Kernel,
        border: BorderPolicy,
        display: DisplayMode,
    },
    /// Binarized image rendered as 0/255.
    Binarize(Threshold),
    /// Edge points of the binarized image rendered as 0/255.
    Edges(Threshold),
    Add(Addend),
    Shadow { invert: bool },
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Negate => "negate",
            Op::Stretch(_) => "stretch",
            Op::Lut(_) => "lut",
            Op::Laplacian { .. } => "laplacian",
            Op::Sharpen { .. } => "sharpen",
            Op::Unsharp { .. } => "unsharp",
            Op::Convolve { .. } => "convolve",
            Op::Binarize(_) => "binarize",
            Op::Edges(_) => "edges",
            Op::Add(_) => "add",
            Op::Shadow { .. } => "shadow",
        }
    }

    /// `original` is the image an [`Addend::Original`] refers to.
    pub fn apply(&self, img: &Image, original: &Image) -> grayfilter_core::Result<Image> {
        self.apply_with(&Serial, img, original)
    }

    pub fn apply_with<E: Executor>(
        &self,
        exec: &E,
        img: &Image,
        original: &Image,
    ) -> grayfilter_core::Result<Image> {
        Ok(match self {
            Op::Negate => negate_with(exec, img),
            Op::Stretch(lut) | Op::Lut(lut) => apply_lut_with(exec, img, lut),
            Op::Laplacian {
                variant,
                display,
                border,
            } => clamp_to_display_with(exec, &laplacian_with(exec, img, *variant, *border), *display),
            Op::Sharpen { variant, border } => laplacian_sharpen_with(exec, img, *variant, *border),
            Op::Unsharp {
                radius,
                display,
                border,
            } => unsharp_mask_with(exec, img, *radius, *display, *border)?,
            Op::Convolve {
                kernel,
                border,
                display,
            } => clamp_to_display_with(exec, &convolve_with(exec, img, kernel, *border), *display),
            Op::Binarize(th) => render_binary(&binarize_with(exec, img, *th)),
            Op::Edges(th) => render_binary(&edge_points_with(exec, &binarize_with(exec, img, *th))),
            Op::Add(Addend::Original) => image_add_with(exec, img, original)?,
            Op::Add(Addend::Image(other)) => image_add_with(exec, img, other)?,
            Op::Shadow { invert: false } => shadow_ne_with(exec, img),
            Op::Shadow { invert: true } => shadow_invert_with(exec, img),
        })
    }
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Negate {} => "negate",
            Stage::Stretch { .. } => "stretch",
            Stage::Lut { .. } => "lut",
            Stage::Laplacian { .. } => "laplacian",
            Stage::Sharpen { .. } => "sharpen",
            Stage::Unsharp { .. } => "unsharp",
            Stage::Convolve { .. } => "convolve",
            Stage::Binarize { .. } => "binarize",
            Stage::Edges { .. } => "edges",
            Stage::Add { .. } => "add",
            Stage::Shadow { .. } => "shadow",
        }
    }

    /// Validates parameters and loads referenced files (relative paths are
    /// taken from `base_dir`).
    pub fn resolve(&self, base_dir: &Path) -> Result<Op> {
        Ok(match self {
            Stage::Negate {} => Op::Negate,
            Stage::Stretch { gamma } => Op::Stretch(Lut::power_law(*gamma)?),
            Stage::Lut { table } => Op::Lut(Lut::from_slice(table)?),
            Stage::Laplacian {
                variant,
                display,
                border,
            } => Op::Laplacian {
                variant: *variant,
                display: *display,
                border: *border,
            },
            Stage::Sharpen { variant, border } => Op::Sharpen {
                variant: *variant,
                border: *border,
            },
            Stage::Unsharp {
                radius,
                display,
                border,
            } => {
                validate_radius(*radius)?;
                Op::Unsharp {
                    radius: *radius,
                    display: *display,
                    border: *border,
                }
            }
            Stage::Convolve {
                kernel,
                kernel_file,
                border,
                display,
            } => {
                let kernel = match (kernel, kernel_file) {
                    (Some(rows), None) => kernel_from_rows(rows)?,
                    (None, Some(path)) => {
                        let path = base_dir.join(path);
                        parse_kernel(&read_text(&path)?)
                            .map_err(|source| Error::Text { path, source })?
                    }
                    _ => {
                        return Err(Error::Spec(
                            "convolve needs exactly one of \"kernel\" or \"kernel_file\"".into(),
                        ))
                    }
                };
                Op::Convolve {
                    kernel,
                    border: *border,
                    display: *display,
                }
            }
            Stage::Binarize { threshold } => Op::Binarize(Threshold(*threshold)),
            Stage::Edges { threshold } => Op::Edges(Threshold(*threshold)),
            Stage::Add { file: None } => Op::Add(Addend::Original),
            Stage::Add { file: Some(path) } => Op::Add(Addend::Image(load_image(&base_dir.join(path))?)),
            Stage::Shadow { invert } => Op::Shadow { invert: *invert },
        })
    }
}

fn kernel_from_rows(rows: &[Vec<f64>]) -> Result<Kernel> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Spec("kernel rows must all have the same length".into()));
    }
    Ok(Kernel::new(width, height, rows.concat())?)
}

impl PipelineSpec {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pipeline specs always serialize")
    }

    /// Resolves every stage; the first failure is reported with its 1-based
    /// stage index.
    pub fn prepare(&self, base_dir: &Path) -> Result<Vec<Op>> {
        if self.stages.is_empty() {
            return Err(Error::Spec("pipeline has no stages".into()));
        }
        self.stages
            .iter()
            .enumerate()
            .map(|(i, stage)| {
                stage.resolve(base_dir).map_err(|e| Error::Stage {
                    index: i + 1,
                    op: stage.name(),
                    source: Box::new(e),
                })
            })
            .collect()
    }
}

/// Applies `ops` in order; `input` is also the operand of `add` stages
/// without a file.
pub fn run_ops_with<E: Executor>(exec: &E, ops: &[Op], input: &Image) -> Result<Image> {
    let mut current = input.clone();
    for (i, op) in ops.iter().enumerate() {
        current = op
            .apply_with(exec, &current, input)
            .map_err(|e| Error::Stage {
                index: i + 1,
                op: op.name(),
                source: Box::new(e.into()),
            })?;
    }
    Ok(current)
}

/// Validates the whole spec, then runs it. Relative file references resolve
/// against the current directory.
pub fn run_pipeline(spec: &PipelineSpec, input: &Image) -> Result<Image> {
    let ops = spec.prepare(Path::new("."))?;
    run_ops_with(&Serial, &ops, input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img() -> Image {
        Image::from_fn(6, 5, |x, y| (x * 40 + y * 9) as u8).unwrap()
    }

    #[test]
    fn parses_documented_shape() {
        let spec =
            PipelineSpec::from_json(r#"{"stages":[{"op":"negate"},{"op":"unsharp","radius":1}]}"#)
                .unwrap();
        assert_eq!(
            spec.stages,
            vec![
                Stage::Negate {},
                Stage::Unsharp {
                    radius: 1,
                    display: DisplayMode::Clamp,
                    border: BorderPolicy::Replicate
                }
            ]
        );
    }

    #[test]
    fn defaults_and_names() {
        let spec = PipelineSpec::from_json(
            r#"{"stages":[{"op":"stretch"},{"op":"laplacian","variant":"eight","display":"rescale"},
                {"op":"edges"},{"op":"shadow","invert":true},{"op":"convolve","kernel":[[1]],"border":"zero"}]}"#,
        )
        .unwrap();
        assert_eq!(spec.stages[0], Stage::Stretch { gamma: 2.0 });
        assert_eq!(spec.stages[2], Stage::Edges { threshold: 128 });
        let round = PipelineSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(round, spec);
    }

    #[test]
    fn rejects_unknown_ops_and_fields() {
        assert!(PipelineSpec::from_json(r#"{"stages":[{"op":"sobel"}]}"#).is_err());
        assert!(PipelineSpec::from_json(r#"{"stages":[{"op":"negate","x":1}]}"#).is_err());
        assert!(PipelineSpec::from_json(r#"{"stages":[{"op":"laplacian","variant":"six"}]}"#).is_err());
        assert!(PipelineSpec::from_json(r#"{"stages":[{"op":"binarize","threshold":300}]}"#).is_err());
    }

    #[test]
    fn validation_happens_before_any_stage_runs() {
        let spec = PipelineSpec::from_json(
            r#"{"stages":[{"op":"negate"},{"op":"stretch","gamma":-1}]}"#,
        )
        .unwrap();
        match run_pipeline(&spec, &img()) {
            Err(Error::Stage { index: 2, op: "stretch", source }) => {
                assert_eq!(source.exit_code(), 1)
            }
            other => panic!("{other:?}"),
        }
        let empty = PipelineSpec { stages: vec![] };
        assert!(matches!(run_pipeline(&empty, &img()), Err(Error::Spec(_))));
        let both = PipelineSpec {
            stages: vec![Stage::Convolve {
                kernel: Some(vec![vec![1.0]]),
                kernel_file: Some("k.txt".into()),
                border: BorderPolicy::Replicate,
                display: DisplayMode::Clamp,
            }],
        };
        assert!(run_pipeline(&both, &img()).is_err());
        let ragged = PipelineSpec::from_json(r#"{"stages":[{"op":"convolve","kernel":[[1,2,3],[1]]}]}"#)
            .unwrap();
        assert!(run_pipeline(&ragged, &img()).is_err());
    }

    #[test]
    fn domain_errors_carry_stage_index() {
        let dir = tempfile::tempdir().unwrap();
        let other = dir.path().join("small.pgm");
        crate::fsio::save_image(&other, &Image::filled(2, 2, 1).unwrap(), Default::default()).unwrap();
        let spec = PipelineSpec {
            stages: vec![Stage::Negate {}, Stage::Add { file: Some("small.pgm".into()) }],
        };
        let ops = spec.prepare(dir.path()).unwrap();
        let e = run_ops_with(&Serial, &ops, &img()).unwrap_err();
        assert!(matches!(e, Error::Stage { index: 2, .. }));
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn double_negate_is_identity() {
        let spec = PipelineSpec { stages: vec![Stage::Negate {}, Stage::Negate {}] };
        assert_eq!(run_pipeline(&spec, &img()).unwrap(), img());
    }
}
