//! Transition search by prototype similarity.

use crate::error::{Error, Result};
use crate::features::{euclidean, FeatureMatrix};
use crate::labels::{FrameLabels, PointAnnotationList};

use super::prototypes::Prototypes;
use super::{assemble_labels, check_points};

/// Dense labels from point annotations, comparing every frame between two
/// adjacent annotations against the two class prototypes.
///
/// Within each open interval the frames drift from resembling the left
/// prototype to resembling the right one. The transition is placed after the
/// last frame whose distance to the left prototype does not exceed its
/// distance to the right prototype; when every interior frame already favors
/// the right prototype the whole interval takes the right class. Adjacent
/// annotations with consecutive frames leave no interior frame and need no
/// search.
pub fn generate_prototype_labels(
    features: &FeatureMatrix,
    points: &PointAnnotationList,
    protos: &Prototypes,
) -> Result<FrameLabels> {
    check_points(features, points)?;
    if protos.dim() != features.cols() {
        return Err(Error::Shape(format!(
            "prototypes have dimension {} but the features have {}",
            protos.dim(),
            features.cols()
        )));
    }
    for p in points.points() {
        if p.class >= protos.class_count() {
            return Err(Error::Index(format!(
                "annotated class {} outside the {} known classes",
                p.class,
                protos.class_count()
            )));
        }
        if !protos.present(p.class) {
            return Err(Error::MissingPrototype(p.class));
        }
    }
    assemble_labels(features.rows(), points, |a, b| {
        let left = protos.mean(a.class);
        let right = protos.mean(b.class);
        let mut cut = a.frame;
        for t in a.frame + 1..b.frame {
            let to_left = euclidean(features.row(t), left);
            let to_right = euclidean(features.row(t), right);
            if to_left <= to_right {
                cut = t;
            }
        }
        Ok(cut)
    })
}
