import logging
import time

from cyclebound import (
    BoundIteration,
    GlobalConfig,
    SearchConfig,
    TConstantMode,
    generate_table,
    prove_average_bound,
)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    print("Starting m = 91 iteration...")
    start_time = time.time()

    config = GlobalConfig(t_constant_mode=TConstantMode.COMPUTER_1)
    iteration = BoundIteration(91, 7 * 10**11, config)
    iteration.run()

    elapsed_time = time.time() - start_time
    print(f"Iteration completed in {elapsed_time:.4f} seconds: {iteration.verdict.value}")
    print(iteration.to_dataframe())


    print("\nStarting 97/54 case search...")
    start_time = time.time()

    outcome = prove_average_bound(SearchConfig.create("unweighted", "97/54", 3), workers=4)

    elapsed_time = time.time() - start_time
    print(f"Search completed in {elapsed_time:.4f} seconds.")
    print(f"proven={outcome.proven} explored={outcome.nodes_explored} closed={outcome.nodes_closed}")


    print("\nStarting short table...")
    start_time = time.time()

    trusted = GlobalConfig(t_constant_mode=TConstantMode.COMPUTER_1, trust_computer_bound=True)
    table = generate_table([98, 117, 369], trusted, workers=3)

    elapsed_time = time.time() - start_time
    print(f"Table completed in {elapsed_time:.4f} seconds.")
    print(table.to_dataframe())
