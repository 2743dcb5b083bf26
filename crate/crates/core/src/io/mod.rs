//! Dataset ingestion and result serialization.

mod edgelist;
mod results;
mod tudataset;

pub use edgelist::{format_edge_list, parse_edge_list, parse_edge_list_str, write_edge_list};
pub use results::{
    mapping_line, read_mapping, read_report, report_line, write_rayleigh, write_results,
    CoarsenRecord, MappingEntry, ReportRow, COARSE_EDGES_FILE, MAPPING_FILE, RAYLEIGH_FILE,
    REPORT_FILE, REPORT_HEADER,
};
pub use tudataset::{parse_tudataset, write_tudataset, DatasetBundle};
