import confball
from confball.core.callback import AbstractCallback


class CountingCallback(AbstractCallback):

    def __init__(self):
        self.functions = []
        self.replicates = []
        self.ended = 0

    def on_function(self, name):
        self.functions.append(name)

    def on_replicate(self, index, record):
        self.replicates.append((record.function, index))

    def on_study_end(self, report):
        self.ended += 1


def test_callback_hooks():
    callback = CountingCallback()
    config = confball.sim.SimulationConfig(n=64, K=2, replicates=3,
                                           functions=("F1", "F3"))
    confball.sim.run_table1(config, callbacks=[
        callback, confball.core.callback.LoggingCallback(every=1)])
    assert callback.functions == ["F1", "F3"]
    assert callback.replicates == [("F1", 0), ("F1", 1), ("F1", 2),
                                   ("F3", 0), ("F3", 1), ("F3", 2)]
    assert callback.ended == 1
