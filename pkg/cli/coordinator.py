"""
Runs a fuzzed `verify` over a pool of worker processes. Each worker
regenerates its instances from (seed, index), so only indices travel through
the queues; results are put back in index order before anything is printed.
"""
from abc import ABC
from dataclasses import dataclass, field
from multiprocessing import Process, Queue
import os
from typing import Iterator, Optional

from tqdm import tqdm

from homext.errors import MalformedInputError
from homext.modcat import Ring

from cli.logging import Logger, install
from cli.verify import Outcome, lookup, run_fuzzed

THREADS_VAR = "HOMEXT_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_VAR, "1")
    try:
        n = int(raw)
    except ValueError:
        raise MalformedInputError(f"expected an integer, got {raw!r}", THREADS_VAR)
    if n < 1:
        raise MalformedInputError(f"must be at least 1, got {n}", THREADS_VAR)
    return n


@dataclass
class Coordinator:
    """ Hands instance indices to the workers and collects their outcomes. """

    class Command(ABC):
        """ A command from the coordinator to a worker. """
        name: str

    class Result(ABC):
        """ A message from a worker back to the coordinator. """
        name: str

    @dataclass
    class RunInstance(Command):
        name = "run_instance"
        index: int

    @dataclass
    class Terminate(Command):
        name = "terminate"

    @dataclass
    class InstanceDone(Result):
        name = "instance_done"
        outcome: Outcome

    @dataclass
    class Terminated(Result):
        name = "terminated"
        worker: int

    prop_id: str
    seed: int
    count: int
    ring: Optional[Ring]
    threads: int = 1
    verbose: bool = False
    request_queue: 'Queue[Command]' = field(default_factory=Queue)
    results_queue: 'Queue[Result]' = field(default_factory=Queue)
    processes: list[Process] = field(default_factory=list)

    def run(self) -> list[Outcome]:
        """ Every outcome, ordered by instance index. """
        lookup(self.prop_id)
        if self.threads == 1 or self.count <= 1:
            outcomes = list(tqdm(self._inline(), total=self.count, desc=self.prop_id, leave=False))
        else:
            outcomes = self._pooled()
        return sorted(outcomes, key=lambda o: o.index)

    def _inline(self) -> Iterator[Outcome]:
        prop = lookup(self.prop_id)
        for index in range(self.count):
            yield run_fuzzed(prop, self.seed, index, self.ring)

    def _pooled(self) -> list[Outcome]:
        workers = min(self.threads, self.count)
        for k in range(workers):
            self.processes.append(self.spawn(k))
        for index in range(self.count):
            self.request_queue.put(Coordinator.RunInstance(index))
        for _ in range(workers):
            self.request_queue.put(Coordinator.Terminate())
        Logger.info(f"Started {workers} workers for {self.count} instances")

        outcomes: list[Outcome] = []
        done = 0
        with tqdm(total=self.count, desc=self.prop_id, leave=False) as bar:
            while done < workers:
                match self.results_queue.get():
                    case Coordinator.InstanceDone(outcome):
                        outcomes.append(outcome)
                        bar.update(1)
                    case Coordinator.Terminated(worker):
                        Logger.debug(f"Worker {worker} finished")
                        done += 1
                    case msg:
                        Logger.warn(f"Unknown message {msg.name}")
        self.close()
        return outcomes

    def spawn(self, worker: int) -> Process:
        proc = Process(
            target=Coordinator.child_start,
            args=(worker, self.prop_id, self.seed, self.ring, self.verbose,
                  self.request_queue, self.results_queue),
            name=f"worker-{worker}")
        proc.start()
        return proc

    @staticmethod
    def child_start(worker: int, prop_id: str, seed: int, ring: Optional[Ring], verbose: bool,
                    request_queue: 'Queue[Command]', results_queue: 'Queue[Result]'):
        """ Main function of a worker process. """
        install(verbose)
        Logger.set_process(f"worker-{worker}")
        prop = lookup(prop_id)
        try:
            while True:
                cmd = request_queue.get()
                # Break on terminate command
                if isinstance(cmd, Coordinator.Terminate):
                    break
                assert isinstance(cmd, Coordinator.RunInstance), f"unexpected command {cmd.name}"
                results_queue.put(Coordinator.InstanceDone(run_fuzzed(prop, seed, cmd.index, ring)))
        except KeyboardInterrupt:
            Logger.error("Worker terminated with SIGINT")
        except Exception as e:
            Logger.error(f"Worker stopped: {type(e).__name__}: {e}")
        finally:
            results_queue.put(Coordinator.Terminated(worker))

    def close(self):
        for proc in self.processes:
            proc.join()
        self.processes.clear()
        Logger.debug("Joined all workers.")
