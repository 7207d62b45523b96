//! `scg-cli`: extraction, analysis reports and a local query service for
//! semantic code graphs.

pub mod args;
pub mod commands;
pub mod report;
pub mod serve;
pub mod workspace;

use std::process::ExitCode;

use anyhow::Result;

use args::{Cli, Command};
use commands::*;
use scg_core::partition::PartitionParams;
use scg_core::similar::SimilarityParams;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            project,
            out,
            verbose,
        } => {
            let o = generate(&project, out.as_deref(), verbose)?;
            print!("{}", generate_text(&o));
            if o.failures > 0 {
                return Ok(ExitCode::from(EXIT_FAILED_FILES));
            }
        }
        Command::Summary(data) => {
            let ws = open(&data)?;
            emit(
                &summary_report(&ws, &data.graph),
                data.format,
                data.out.as_deref(),
            )?;
        }
        Command::Crucial { data, k, metric } => {
            let ws = open(&data)?;
            let r = crucial_report(&ws, &data.graph, k, metric.as_deref())?;
            emit(&r, data.format, data.out.as_deref())?;
        }
        Command::Similar {
            data,
            min_shared,
            min_percent,
            limit,
        } => {
            require_scg_only(&data.graph, "similar")?;
            let ws = open(&data)?;
            let params = SimilarityParams {
                min_shared,
                min_percent,
            };
            emit(
                &similar_report(&ws, params, limit),
                data.format,
                data.out.as_deref(),
            )?;
        }
        Command::Partition {
            data,
            seed,
            resolution,
            declaration_weight,
            graphml,
        } => {
            let ws = open(&data)?;
            let params = PartitionParams {
                resolution,
                seed,
                declaration_weight,
            };
            let r = partition_report(&ws, &data.graph, params, graphml.as_deref())?;
            emit(&r, data.format, data.out.as_deref())?;
        }
        Command::Count {
            data,
            kind,
            local,
            group_by,
            top,
        } => {
            let ws = open(&data)?;
            let r = count_report(&ws, &data.graph, kind.as_deref(), local, &group_by, top)?;
            emit(&r, data.format, data.out.as_deref())?;
        }
        Command::Export {
            data,
            graph,
            include,
            to,
            out,
        } => {
            let args = args::DataArgs {
                data,
                graph: graph.clone(),
                include,
                format: args::Format::Text,
                out: None,
            };
            let ws = open(&args)?;
            for p in export_views(&ws, &graph, &to, &out)? {
                println!("wrote {}", p.display());
            }
        }
        Command::Serve {
            data,
            include,
            host,
            port,
        } => {
            let args = args::DataArgs {
                data,
                graph: vec![],
                include,
                format: args::Format::Text,
                out: None,
            };
            let ws = open(&args)?;
            tokio::runtime::Runtime::new()?.block_on(serve::serve(ws, &host, port))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
