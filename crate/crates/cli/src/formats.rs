//! On-disk text formats.
//!
//! - Feature files: CSV without header, one row per frame, D float columns.
//! - Skeleton files: CSV without header, one row per frame, J*C float
//!   columns in joint-major channel-minor order.
//! - Topology files: J lines, each the parent joint index or -1 for a root.
//! - Label files: one integer per line, -1 for an unlabeled frame.
//! - Points files: `frame,class` lines with ascending frames.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a file
//! read back and rewritten is byte-identical. All writers go through
//! [`write_atomic`], which writes a sibling temporary file and renames it
//! into place.

use std::fs;
use std::path::Path;

use pointseg_core::{
    FeatureMatrix, FrameLabels, PointAnnotation, PointAnnotationList, SkeletonSequence,
    SkeletonTopology,
};

use crate::error::{CliError, Result};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a file through a sibling `.tmp` and rename it into place, creating
/// parent directories as needed. Readers never observe partial content.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(write_err)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents).map_err(write_err)?;
    fs::rename(tmp, path).map_err(write_err)
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::ParseFile {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_float_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            return Err(parse_error(path, i + 1, "empty line"));
        }
        let row = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_error(path, i + 1, format!("not a number: {cell:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(
                    path,
                    i + 1,
                    format!("row has {} columns, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "file has no rows"));
    }
    Ok(rows)
}

fn float_rows_to_string<'a>(rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{v}"));
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn read_feature_csv(path: &Path) -> Result<FeatureMatrix> {
    let rows = parse_float_rows(path)?;
    FeatureMatrix::from_rows(rows).map_err(|e| parse_error(path, 1, e.to_string()))
}

pub fn write_feature_csv(path: &Path, matrix: &FeatureMatrix) -> Result<()> {
    write_atomic(path, &float_rows_to_string(matrix.iter_rows()))
}

/// Skeleton CSV rows carry J*C columns; the joint count comes from the
/// topology and the channel count is inferred (2 or 3).
pub fn read_skeleton_csv(path: &Path, joints: usize) -> Result<SkeletonSequence> {
    let rows = parse_float_rows(path)?;
    let cols = rows[0].len();
    if joints == 0 || cols % joints != 0 {
        return Err(parse_error(
            path,
            1,
            format!("{cols} columns do not divide into {joints} joints"),
        ));
    }
    let channels = cols / joints;
    let frames = rows.len();
    let data = rows.into_iter().flatten().collect();
    SkeletonSequence::new(data, frames, joints, channels)
        .map_err(|e| parse_error(path, 1, e.to_string()))
}

pub fn write_skeleton_csv(path: &Path, skel: &SkeletonSequence) -> Result<()> {
    write_atomic(
        path,
        &float_rows_to_string((0..skel.frames()).map(|t| skel.frame(t))),
    )
}

pub fn read_topology(path: &Path) -> Result<SkeletonTopology> {
    let text = read_to_string(path)?;
    let mut parents = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let v = line.trim().parse::<i64>().map_err(|_| {
            parse_error(path, i + 1, format!("not a parent index: {:?}", line.trim()))
        })?;
        parents.push(v);
    }
    SkeletonTopology::from_parent_indices(&parents)
        .map_err(|e| parse_error(path, 1, e.to_string()))
}

pub fn write_topology(path: &Path, topo: &SkeletonTopology) -> Result<()> {
    let mut out = String::new();
    for p in topo.parent_indices() {
        out.push_str(&format!("{p}\n"));
    }
    write_atomic(path, &out)
}

pub fn read_labels(path: &Path) -> Result<FrameLabels> {
    let text = read_to_string(path)?;
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let v = line.trim().parse::<i64>().map_err(|_| {
            parse_error(path, i + 1, format!("not a class id: {:?}", line.trim()))
        })?;
        match v {
            -1 => labels.push(None),
            c if c >= 0 => labels.push(Some(c as usize)),
            c => {
                return Err(parse_error(
                    path,
                    i + 1,
                    format!("class id {c} is negative; -1 is the only sentinel"),
                ))
            }
        }
    }
    FrameLabels::new(labels).map_err(|e| parse_error(path, 1, e.to_string()))
}

pub fn write_labels(path: &Path, labels: &FrameLabels) -> Result<()> {
    let mut out = String::new();
    for slot in labels.as_slice() {
        match slot {
            Some(c) => out.push_str(&format!("{c}\n")),
            None => out.push_str("-1\n"),
        }
    }
    write_atomic(path, &out)
}

pub fn read_points(path: &Path, sequence_length: usize) -> Result<PointAnnotationList> {
    let text = read_to_string(path)?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut cells = line.trim().split(',');
        let frame = cells
            .next()
            .and_then(|c| c.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_error(path, i + 1, "expected `frame,class`"))?;
        let class = cells
            .next()
            .and_then(|c| c.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_error(path, i + 1, "expected `frame,class`"))?;
        if cells.next().is_some() {
            return Err(parse_error(path, i + 1, "expected exactly two fields"));
        }
        points.push(PointAnnotation { frame, class });
    }
    PointAnnotationList::new(points, sequence_length)
        .map_err(|e| parse_error(path, 1, e.to_string()))
}

pub fn write_points(path: &Path, points: &PointAnnotationList) -> Result<()> {
    let mut out = String::new();
    for p in points.points() {
        out.push_str(&format!("{},{}\n", p.frame, p.class));
    }
    write_atomic(path, &out)
}

/// Split files list one video id per line.
pub fn read_split(path: &Path) -> Result<Vec<String>> {
    let text = read_to_string(path)?;
    let ids: Vec<String> = text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    if ids.is_empty() {
        return Err(parse_error(path, 1, "split file lists no videos"));
    }
    Ok(ids)
}

pub fn write_split(path: &Path, ids: &[String]) -> Result<()> {
    let mut out = String::new();
    for id in ids {
        out.push_str(id);
        out.push('\n');
    }
    write_atomic(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn feature_csv_round_trip_is_byte_identical() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let m = FeatureMatrix::from_rows(vec![
            vec![0.1, -2.5, 1.0 / 3.0],
            vec![1e-12, 3.0, 42.0],
        ])
        .unwrap();
        write_feature_csv(&path, &m).unwrap();
        let first = fs::read(&path).unwrap();
        let back = read_feature_csv(&path).unwrap();
        assert_eq!(back, m);
        write_feature_csv(&path, &back).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn labels_round_trip_with_unlabeled() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("l.txt");
        let l = FrameLabels::new(vec![Some(0), None, Some(3)]).unwrap();
        write_labels(&path, &l).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "0\n-1\n3\n");
        assert_eq!(read_labels(&path).unwrap(), l);
    }

    #[test]
    fn labels_reject_garbage_with_line_number() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("l.txt");
        fs::write(&path, "0\nbanana\n").unwrap();
        let err = read_labels(&path).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn points_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let pts = PointAnnotationList::new(
            vec![
                PointAnnotation { frame: 2, class: 1 },
                PointAnnotation { frame: 9, class: 0 },
            ],
            20,
        )
        .unwrap();
        write_points(&path, &pts).unwrap();
        assert_eq!(read_points(&path, 20).unwrap(), pts);
    }

    #[test]
    fn skeleton_csv_infers_channels() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.csv");
        fs::write(&path, "1,2,3,4,5,6\n7,8,9,10,11,12\n").unwrap();
        let skel = read_skeleton_csv(&path, 2).unwrap();
        assert_eq!((skel.frames(), skel.joints(), skel.channels()), (2, 2, 3));
        let skel2 = read_skeleton_csv(&path, 3).unwrap();
        assert_eq!(skel2.channels(), 2);
    }

    #[test]
    fn skeleton_and_topology_round_trip() {
        let dir = tempdir().unwrap();
        let skel_path = dir.path().join("s.csv");
        let topo_path = dir.path().join("t.txt");
        let skel = SkeletonSequence::new(
            vec![0.5, -1.0, 2.0, 3.25, 4.0, 5.0, 6.0, 7.0],
            2,
            2,
            2,
        )
        .unwrap();
        let topo = SkeletonTopology::from_parent_indices(&[-1, 0]).unwrap();
        write_skeleton_csv(&skel_path, &skel).unwrap();
        write_topology(&topo_path, &topo).unwrap();
        assert_eq!(read_skeleton_csv(&skel_path, 2).unwrap(), skel);
        assert_eq!(read_topology(&topo_path).unwrap(), topo);
    }

    #[test]
    fn no_tmp_file_left_behind() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("deep").join("f.csv");
        write_atomic(&path, "1\n").unwrap();
        let entries: Vec<_> = fs::read_dir(dir.path().join("deep"))
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(entries, vec![std::ffi::OsString::from("f.csv")]);
    }
}
