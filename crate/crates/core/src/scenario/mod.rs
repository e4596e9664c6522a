//! Seeded scenario generators and station data ingestion.

mod bike;
mod csv_io;
mod drone;

pub use bike::{gen_bike, sample_stations, BikeScenarioConfig};
pub use csv_io::{export_station_csv, ingest_station_csv};
pub use drone::{distance, gen_drone, star_subgraph, DroneScenarioConfig};
