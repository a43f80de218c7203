"""Full run on a small synthetic corpus, printed as the markdown report."""
from signed_egonet.egonet import MeanShiftConfig
from signed_egonet.pipeline import PipelineConfig, run_pipeline
from signed_egonet.report import render_report
from signed_egonet.synth import SynthSpec, generate_corpus

spec = SynthSpec(n_egos=25, count_model="expected", seed=3)
records, _ = generate_corpus(spec)
cfg = PipelineConfig(meanshift=MeanShiftConfig(log_space=True, quantile=spec.quantile))
print(render_report(run_pipeline(records, cfg, name="synthetic").report, "markdown"))
