//! Event records, track grouping, timestamp sampling, annotation encoding,
//! image screening, and label-box construction.
//!
//! File and directory handling lives in the companion crate; this module
//! works on in-memory values and strings so it stays `no_std`-compatible.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::geometry::{self, BBox, GeometryError, Polygon};
use crate::image::Image;
use crate::math;
use crate::solarcoord::{self, CoordError, ImageHeader};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("start time is after end time")]
    UnorderedTimes,
    #[error("event {0} mixes event types")]
    InconsistentTrack(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("record has no chain code")]
    MissingChainCode,
    #[error("annotation corners collapse to a degenerate box")]
    DegenerateAnnotation,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coord(#[from] CoordError),
}

/// UTC timestamp with one-second resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub fn from_unix_seconds(secs: i64) -> Self {
        Self(secs)
    }

    pub fn unix_seconds(self) -> i64 {
        self.0
    }

    pub fn seconds_since(self, other: Timestamp) -> i64 {
        self.0 - other.0
    }

    pub fn plus_seconds(self, secs: i64) -> Timestamp {
        Timestamp(self.0 + secs)
    }

    /// Calendar year of the timestamp (proleptic Gregorian, UTC).
    pub fn year(self) -> i32 {
        let days = self.0.div_euclid(86_400);
        civil_from_days(days).0 as i32
    }
}

/// Days since 1970-01-01 to (year, month, day); the standard era-based
/// integer conversion.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = (z - era * 146_097) as u64;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe as i64 + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventType {
    ActiveRegion,
    CoronalHole,
}

impl EventType {
    pub fn code(self) -> &'static str {
        match self {
            EventType::ActiveRegion => "AR",
            EventType::CoronalHole => "CH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "AR" => Some(EventType::ActiveRegion),
            "CH" => Some(EventType::CoronalHole),
            _ => None,
        }
    }
}

/// Detector that produced the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Hmi,
    Spoca,
    Other,
}

impl Source {
    pub fn code(self) -> &'static str {
        match self {
            Source::Hmi => "HMI",
            Source::Spoca => "SPOCA",
            Source::Other => "OTHER",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "HMI" => Some(Source::Hmi),
            "SPOCA" => Some(Source::Spoca),
            "OTHER" => Some(Source::Other),
            _ => None,
        }
    }
}

/// One detector report: an id, a time span, and an HPC-arcsec bounding box,
/// optionally with a chain-code outline (also HPC arcsec).
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub event_id: String,
    pub event_type: EventType,
    pub source: Source,
    pub start_time: Timestamp,
    pub end_time: Timestamp,
    pub hpc_box: BBox,
    pub chain_code: Option<Polygon>,
}

impl EventRecord {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.start_time > self.end_time {
            return Err(DatasetError::UnorderedTimes);
        }
        Ok(())
    }
}

/// All reports sharing one event id, time-sorted. Only tracks with at least
/// three records survive grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrack {
    pub event_id: String,
    pub event_type: EventType,
    pub records: Vec<EventRecord>,
}

impl EventTrack {
    pub fn start_time(&self) -> Timestamp {
        self.records[0].start_time
    }
}

pub const MIN_TRACK_RECORDS: usize = 3;

/// Groups records by event id, sorts each group by start time, and drops
/// groups with fewer than [`MIN_TRACK_RECORDS`] records. Tracks come back
/// ordered by event id.
pub fn group_records(records: Vec<EventRecord>) -> Result<Vec<EventTrack>, DatasetError> {
    let mut groups: BTreeMap<String, Vec<EventRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.event_id.clone()).or_default().push(r);
    }
    let mut tracks = Vec::new();
    for (event_id, mut group) in groups {
        let event_type = group[0].event_type;
        if group.iter().any(|r| r.event_type != event_type) {
            return Err(DatasetError::InconsistentTrack(event_id));
        }
        if group.len() < MIN_TRACK_RECORDS {
            continue;
        }
        group.sort_by_key(|r| (r.start_time, r.end_time));
        tracks.push(EventTrack {
            event_id,
            event_type,
            records: group,
        });
    }
    Ok(tracks)
}

/// Five timestamps splitting `[start, end]` into four equal intervals, with
/// coinciding samples collapsed. Sub-second remainders floor toward the
/// start, so both endpoints are always exact.
pub fn sample_times(start: Timestamp, end: Timestamp) -> Result<Vec<Timestamp>, DatasetError> {
    if start > end {
        return Err(DatasetError::UnorderedTimes);
    }
    let span = end.seconds_since(start);
    let mut out = Vec::with_capacity(5);
    for k in 0..=4i64 {
        let t = start.plus_seconds(k * span / 4);
        if out.last() != Some(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Splits tracks on the year of their first record: `<= last_train_year`
/// goes to the training split, anything later to the test split.
pub fn split_by_year(
    tracks: Vec<EventTrack>,
    last_train_year: i32,
) -> (Vec<EventTrack>, Vec<EventTrack>) {
    tracks
        .into_iter()
        .partition(|t| t.start_time().year() <= last_train_year)
}

/// Four-corner annotation for one frame, in pixel units. Corners are kept
/// in (top-left, top-right, bottom-right, bottom-left) order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annotation {
    pub frame_index: usize,
    pub xs: [f64; 4],
    pub ys: [f64; 4],
}

impl Annotation {
    pub fn new(frame_index: usize, xs: [f64; 4], ys: [f64; 4]) -> Result<Self, DatasetError> {
        let b = geometry::bbox_from_corners(xs, ys)?;
        if b.is_degenerate() {
            return Err(DatasetError::DegenerateAnnotation);
        }
        Ok(Self {
            frame_index,
            xs,
            ys,
        })
    }

    pub fn from_bbox(frame_index: usize, b: &BBox) -> Result<Self, DatasetError> {
        Self::new(
            frame_index,
            [b.x1, b.x2, b.x2, b.x1],
            [b.y1, b.y1, b.y2, b.y2],
        )
    }

    pub fn bbox(&self) -> BBox {
        geometry::bbox_from_corners(self.xs, self.ys).expect("validated at construction")
    }
}

/// Encodes one annotation line: frame index, the four x corners, then the
/// four y corners, comma-separated. Fractional pixels are rounded half up.
pub fn format_annotation_line(a: &Annotation) -> String {
    let r = |v: f64| math::round_half_up(v) as i64;
    format!(
        "{},{},{},{},{},{},{},{},{}",
        a.frame_index,
        r(a.xs[0]),
        r(a.xs[1]),
        r(a.xs[2]),
        r(a.xs[3]),
        r(a.ys[0]),
        r(a.ys[1]),
        r(a.ys[2]),
        r(a.ys[3])
    )
}

/// Serializes annotations one per line in frame order.
pub fn write_annotations(annotations: &[Annotation]) -> String {
    let mut out = String::new();
    for a in annotations {
        out.push_str(&format_annotation_line(a));
        out.push('\n');
    }
    out
}

/// Parses an annotation document; errors carry 1-based line numbers.
pub fn parse_annotations(text: &str) -> Result<Vec<Annotation>, DatasetError> {
    let mut out: Vec<Annotation> = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 9 {
            return Err(DatasetError::Parse {
                line,
                reason: format!("expected 9 fields, found {}", fields.len()),
            });
        }
        let frame_index: usize = fields[0].trim().parse().map_err(|_| DatasetError::Parse {
            line,
            reason: format!("bad frame index {:?}", fields[0]),
        })?;
        if seen.insert(frame_index, line).is_some() {
            return Err(DatasetError::Parse {
                line,
                reason: format!("duplicate frame index {frame_index}"),
            });
        }
        let mut vals = [0.0f64; 8];
        for (i, field) in fields[1..].iter().enumerate() {
            vals[i] = field.trim().parse().map_err(|_| DatasetError::Parse {
                line,
                reason: format!("bad numeric field {:?}", field),
            })?;
        }
        let a = Annotation::new(
            frame_index,
            [vals[0], vals[1], vals[2], vals[3]],
            [vals[4], vals[5], vals[6], vals[7]],
        )
        .map_err(|e| DatasetError::Parse {
            line,
            reason: e.to_string(),
        })?;
        out.push(a);
    }
    Ok(out)
}

/// Outcome of screening one frame before it enters a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreenResult {
    Ok,
    /// Mean intensity below the black threshold.
    Black,
    /// The image could not be loaded at all.
    Missing,
}

/// Mean-intensity fraction below which a frame counts as black.
pub const BLACK_THRESHOLD: f64 = 0.02;

pub fn screen_image(img: &Image) -> ScreenResult {
    screen_image_with(img, BLACK_THRESHOLD)
}

pub fn screen_image_with(img: &Image, black_threshold: f64) -> ScreenResult {
    if img.mean() < black_threshold {
        ScreenResult::Black
    } else {
        ScreenResult::Ok
    }
}

/// Which label source a pixel-space box is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Convert the HEK-reported HPC box corners to pixels.
    HekBox,
    /// Rasterize the chain-code outline and take its maximal inscribed box.
    ChainInscribed,
}

impl LabelMode {
    pub fn code(self) -> &'static str {
        match self {
            LabelMode::HekBox => "hek_box",
            LabelMode::ChainInscribed => "chain_inscribed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hek_box" | "hek" => Some(LabelMode::HekBox),
            "chain_inscribed" | "chain" => Some(LabelMode::ChainInscribed),
            _ => None,
        }
    }
}

/// Builds the pixel-space label box for a record under the given mode.
pub fn label_box(
    record: &EventRecord,
    mode: LabelMode,
    header: &ImageHeader,
) -> Result<BBox, DatasetError> {
    match mode {
        LabelMode::HekBox => {
            let mut xs = [0.0; 4];
            let mut ys = [0.0; 4];
            for (i, (cx, cy)) in record.hpc_box.corners().iter().enumerate() {
                let (px, py) = solarcoord::hpc_to_pixel(*cx, *cy, header)?;
                xs[i] = px;
                ys[i] = py;
            }
            Ok(geometry::bbox_from_corners(xs, ys)?)
        }
        LabelMode::ChainInscribed => {
            let chain = record
                .chain_code
                .as_ref()
                .ok_or(DatasetError::MissingChainCode)?;
            let mut pixel_vertices = Vec::with_capacity(chain.vertices().len());
            for &(x, y) in chain.vertices() {
                pixel_vertices.push(solarcoord::hpc_to_pixel(x, y, header)?);
            }
            let pixel_poly = Polygon::new(pixel_vertices)?;
            let mask = geometry::rasterize(&pixel_poly, header.width, header.height)?;
            Ok(geometry::maximal_inscribed_box(&mask)?)
        }
    }
}

/// Metadata carried alongside a frame sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceMeta {
    pub event_id: String,
    pub event_type: EventType,
    pub header: ImageHeader,
}

/// Ordered frames plus sparse ground-truth annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub frames: Vec<Image>,
    pub annotations: BTreeMap<usize, Annotation>,
    pub meta: SequenceMeta,
}

impl Sequence {
    pub fn validate(&self) -> Result<(), DatasetError> {
        for (&idx, a) in &self.annotations {
            if idx >= self.frames.len() || a.frame_index != idx {
                return Err(DatasetError::Parse {
                    line: 0,
                    reason: format!("annotation frame {idx} outside sequence"),
                });
            }
        }
        Ok(())
    }

    pub fn annotated_indices(&self) -> Vec<usize> {
        self.annotations.keys().copied().collect()
    }

    /// Consecutive annotated-frame pairs, the unit the trainer samples.
    pub fn annotated_pairs(&self) -> Vec<(usize, usize)> {
        let idx = self.annotated_indices();
        idx.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ts(secs: i64) -> Timestamp {
        Timestamp::from_unix_seconds(secs)
    }

    fn record(id: &str, kind: EventType, start: i64, end: i64) -> EventRecord {
        EventRecord {
            event_id: id.to_string(),
            event_type: kind,
            source: Source::Hmi,
            start_time: ts(start),
            end_time: ts(end),
            hpc_box: BBox::new(-100.0, -100.0, 100.0, 100.0).unwrap(),
            chain_code: None,
        }
    }

    #[test]
    fn grouping_drops_short_tracks_and_sorts() {
        let records = vec![
            record("a", EventType::ActiveRegion, 300, 400),
            record("b", EventType::ActiveRegion, 0, 100),
            record("a", EventType::ActiveRegion, 0, 100),
            record("b", EventType::ActiveRegion, 100, 200),
            record("a", EventType::ActiveRegion, 100, 200),
        ];
        let tracks = group_records(records).unwrap();
        assert_eq!(tracks.len(), 1);
        assert_eq!(tracks[0].event_id, "a");
        let starts: Vec<i64> = tracks[0]
            .records
            .iter()
            .map(|r| r.start_time.unix_seconds())
            .collect();
        assert_eq!(starts, vec![0, 100, 300]);
    }

    #[test]
    fn grouping_empty_and_inconsistent() {
        assert!(group_records(Vec::new()).unwrap().is_empty());
        let mixed = vec![
            record("a", EventType::ActiveRegion, 0, 1),
            record("a", EventType::CoronalHole, 1, 2),
            record("a", EventType::ActiveRegion, 2, 3),
        ];
        assert_eq!(
            group_records(mixed),
            Err(DatasetError::InconsistentTrack("a".to_string()))
        );
    }

    #[test]
    fn grouping_conserves_records() {
        let records = vec![
            record("a", EventType::ActiveRegion, 0, 1),
            record("a", EventType::ActiveRegion, 1, 2),
            record("a", EventType::ActiveRegion, 2, 3),
            record("b", EventType::CoronalHole, 0, 1),
        ];
        let n = records.len();
        let tracks = group_records(records).unwrap();
        let kept: usize = tracks.iter().map(|t| t.records.len()).sum();
        assert_eq!(kept + 1, n); // "b" dropped as too short
    }

    #[test]
    fn sample_times_four_intervals() {
        let h = 3600;
        let out = sample_times(ts(0), ts(4 * h)).unwrap();
        let secs: Vec<i64> = out.iter().map(|t| t.unix_seconds()).collect();
        assert_eq!(secs, vec![0, h, 2 * h, 3 * h, 4 * h]);

        let out = sample_times(ts(0), ts(2 * h)).unwrap();
        let secs: Vec<i64> = out.iter().map(|t| t.unix_seconds()).collect();
        assert_eq!(secs, vec![0, 1800, 3600, 5400, 7200]);
    }

    #[test]
    fn sample_times_collapses_and_rejects() {
        assert_eq!(sample_times(ts(50), ts(50)).unwrap(), vec![ts(50)]);
        assert_eq!(sample_times(ts(1), ts(0)), Err(DatasetError::UnorderedTimes));
        // Remainders floor but endpoints stay exact.
        let out = sample_times(ts(0), ts(10)).unwrap();
        let secs: Vec<i64> = out.iter().map(|t| t.unix_seconds()).collect();
        assert_eq!(secs, vec![0, 2, 5, 7, 10]);
    }

    #[test]
    fn year_extraction() {
        assert_eq!(ts(0).year(), 1970);
        // 2016-06-01T00:00:00Z and 2018-03-01T00:00:00Z.
        assert_eq!(ts(1_464_739_200).year(), 2016);
        assert_eq!(ts(1_519_862_400).year(), 2018);
        // Year boundary: 2017-12-31T23:59:59Z vs 2018-01-01T00:00:00Z.
        assert_eq!(ts(1_514_764_799).year(), 2017);
        assert_eq!(ts(1_514_764_800).year(), 2018);
        assert_eq!(ts(-1).year(), 1969);
    }

    #[test]
    fn split_by_year_examples() {
        let t2016 = EventTrack {
            event_id: "a".to_string(),
            event_type: EventType::ActiveRegion,
            records: vec![record("a", EventType::ActiveRegion, 1_464_739_200, 1_464_739_300)],
        };
        let t2018 = EventTrack {
            event_id: "b".to_string(),
            event_type: EventType::ActiveRegion,
            records: vec![record("b", EventType::ActiveRegion, 1_519_862_400, 1_519_862_500)],
        };
        let (train, test) = split_by_year(vec![t2016.clone(), t2018.clone()], 2017);
        assert_eq!(train, vec![t2016]);
        assert_eq!(test, vec![t2018]);
        let (train, test) = split_by_year(Vec::new(), 2017);
        assert!(train.is_empty() && test.is_empty());
    }

    #[test]
    fn annotation_line_round_trip() {
        let parsed = parse_annotations("12,100,160,160,100,40,40,90,90\n").unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].frame_index, 12);
        assert_eq!(parsed[0].bbox(), BBox::new(100.0, 40.0, 160.0, 90.0).unwrap());
        assert_eq!(
            format_annotation_line(&parsed[0]),
            "12,100,160,160,100,40,40,90,90"
        );
    }

    #[test]
    fn annotation_parse_errors_carry_line_numbers() {
        assert!(parse_annotations("").unwrap().is_empty());

        let short = parse_annotations("1,2,3\n");
        assert_eq!(
            short,
            Err(DatasetError::Parse {
                line: 1,
                reason: "expected 9 fields, found 3".to_string()
            })
        );

        let bad = parse_annotations("0,1,2,2,1,1,1,2,2\n1,x,2,2,1,1,1,2,2\n");
        match bad {
            Err(DatasetError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        let dup = parse_annotations("3,1,2,2,1,1,1,2,2\n3,1,2,2,1,1,1,2,2\n");
        match dup {
            Err(DatasetError::Parse { line: 2, reason }) => {
                assert!(reason.contains("duplicate"));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn annotation_rejects_degenerate() {
        assert_eq!(
            Annotation::new(0, [5.0; 4], [1.0, 1.0, 9.0, 9.0]),
            Err(DatasetError::DegenerateAnnotation)
        );
    }

    #[test]
    fn annotation_write_is_half_up_rounded() {
        let a = Annotation::new(2, [0.5, 10.4, 10.4, 0.5], [1.5, 1.5, 7.6, 7.6]).unwrap();
        assert_eq!(format_annotation_line(&a), "2,1,10,10,1,2,2,8,8");
    }

    #[test]
    fn screening_thresholds() {
        let black = Image::zeros(8, 8);
        assert_eq!(screen_image(&black), ScreenResult::Black);
        let gray = Image::from_data(2, 2, vec![0.5; 4]);
        assert_eq!(screen_image(&gray), ScreenResult::Ok);
        let near = Image::from_data(2, 2, vec![0.019; 4]);
        assert_eq!(screen_image(&near), ScreenResult::Black);
        let above = Image::from_data(2, 2, vec![0.021; 4]);
        assert_eq!(screen_image(&above), ScreenResult::Ok);
    }

    #[test]
    fn label_box_hek_mode_flips_y() {
        let header = ImageHeader {
            cdelt1: 1.0,
            cdelt2: 1.0,
            crpix1: 33.0,
            crpix2: 33.0,
            rsun: 30.0,
            width: 64,
            height: 64,
            obs_time: ts(0),
        };
        let mut r = record("a", EventType::ActiveRegion, 0, 1);
        r.hpc_box = BBox::new(-10.0, -4.0, 10.0, 4.0).unwrap();
        let b = label_box(&r, LabelMode::HekBox, &header).unwrap();
        // Disk center is pixel (32, 32); the box is centered there.
        assert_eq!(b, BBox::new(22.0, 28.0, 42.0, 36.0).unwrap());
    }

    #[test]
    fn label_box_chain_modes() {
        let header = ImageHeader {
            cdelt1: 1.0,
            cdelt2: 1.0,
            crpix1: 17.0,
            crpix2: 17.0,
            rsun: 15.0,
            width: 32,
            height: 32,
            obs_time: ts(0),
        };
        let mut r = record("a", EventType::ActiveRegion, 0, 1);
        assert_eq!(
            label_box(&r, LabelMode::ChainInscribed, &header),
            Err(DatasetError::MissingChainCode)
        );
        // Rectangular outline in HPC arcsec: x in [-6, 6], y in [-4, 4]
        // maps to pixels x in [10, 22], y in [12, 20].
        r.chain_code = Some(
            Polygon::new(vec![(-6.0, -4.0), (6.0, -4.0), (6.0, 4.0), (-6.0, 4.0)]).unwrap(),
        );
        let b = label_box(&r, LabelMode::ChainInscribed, &header).unwrap();
        assert_eq!(b, BBox::new(10.0, 12.0, 22.0, 20.0).unwrap());
    }
}
