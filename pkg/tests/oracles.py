"""Reference values frozen from mpmath (30 digits); see generate_oracles.py."""

BESSEL = {  # (kind, order, z): value
    ('I', 0, 1e-8): 1.000000000000000025,
    ('K', 0, 1e-8): 18.536612259610778409,
    ('I', 1, 1e-8): 5.0000000000000000625e-9,
    ('K', 1, 1e-8): 99999999.999999904817,
    ('I', 2, 1e-8): 1.2500000000000000104e-17,
    ('K', 2, 1e-8): 19999999999999999.5,
    ('I', 0, 1e-3): 1.000000250000015625,
    ('K', 0, 1e-3): 7.0236888005623813436,
    ('I', 1, 1e-3): 0.00050000006250000260417,
    ('K', 1, 1e-3): 999.99623815608557428,
    ('I', 2, 1e-3): 1.2500001041666699219e-7,
    ('K', 2, 1e-3): 1999999.5000009717109,
    ('I', 0, 0.1): 1.0025015629340956014,
    ('K', 0, 0.1): 2.4270690247020166125,
    ('I', 1, 0.1): 0.050062526047092692114,
    ('K', 1, 0.1): 9.8538447808706061348,
    ('I', 2, 0.1): 0.001251041992241759124,
    ('K', 2, 0.1): 199.50396464211413931,
    ('I', 0, 1): 1.2660658777520083356,
    ('K', 0, 1): 0.42102443824070833334,
    ('I', 1, 1): 0.56515910399248502721,
    ('K', 1, 1): 0.60190723019723457474,
    ('I', 2, 1): 0.13574766976703828118,
    ('K', 2, 1): 1.6248388986351774828,
    ('I', 0, 1.999): 2.2779954074072239023,
    ('K', 0, 1.999): 0.11403383058923292414,
    ('I', 1, 1.999): 1.5891532106427279671,
    ('K', 1, 1.999): 0.1400498420771096829,
    ('I', 2, 1.999): 0.68804722267212838735,
    ('K', 2, 1.999): 0.25415373261735666891,
    ('I', 0, 2): 2.2795853023360672674,
    ('K', 0, 2): 0.11389387274953343565,
    ('I', 1, 2): 1.5906368546373290634,
    ('K', 1, 2): 0.13986588181652242728,
    ('I', 2, 2): 0.68894844769873820405,
    ('K', 2, 2): 0.25375975456605586294,
    ('I', 0, 2.001): 2.2811766815318861217,
    ('K', 0, 2.001): 0.1137540987366846116,
    ('I', 1, 2.001): 1.5921217447946493845,
    ('K', 1, 2.001): 0.13968218830176753496,
    ('I', 2, 2.001): 0.68985059977811362339,
    ('K', 2, 2.001): 0.25336648084739679047,
    ('I', 0, 5): 27.239871823604446895,
    ('K', 0, 5): 0.0036910983340425942747,
    ('I', 1, 5): 24.335642142450527199,
    ('K', 1, 5): 0.0040446134454521642084,
    ('I', 2, 5): 17.505614966624236015,
    ('K', 2, 5): 0.0053089437122234599581,
    ('I', 0, 19.5): 26760525.339838766027,
    ('K', 0, 19.5): 9.5848240093128286566e-10,
    ('I', 1, 19.5): 26065069.264457165694,
    ('K', 1, 19.5): 9.8275877543638105883e-10,
    ('I', 2, 19.5): 24087184.902458543905,
    ('K', 2, 19.5): 1.0592781727709116922e-9,
    ('I', 0, 20.5): 70922869.834317006649,
    ('K', 0, 20.5): 3.4400085817085980501e-10,
    ('I', 1, 20.5): 69170831.679184372867,
    ('K', 1, 20.5): 3.5229344787112481407e-10,
    ('I', 2, 20.5): 64174496.011957555638,
    ('K', 2, 20.5): 3.7837095064609149419e-10,
    ('I', 0, 50): 2.9325537838493363267e+20,
    ('K', 0, 50): 3.4101677497894955139e-23,
    ('I', 1, 50): 2.9030785901035567968e+20,
    ('K', 1, 50): 3.4441022267175556126e-23,
    ('I', 2, 50): 2.8164306402451940548e+20,
    ('K', 2, 50): 3.5479318388581977384e-23,
    ('I', 0, 300): 4.4758473679350521181e+128,
    ('K', 0, 300): 3.7236948548891432633e-132,
    ('I', 1, 300): 4.4683813850369544139e+128,
    ('K', 1, 300): 3.7298958583323726986e-132,
    ('I', 2, 300): 4.446058158701472422e+128,
    ('K', 2, 300): 3.7485608272780257479e-132,
    ('I', 0, 700): 1.5295933476718737363e+302,
    ('K', 0, 700): 4.669776431685376881e-306,
    ('I', 1, 700): 1.5285003902339006881e+302,
    ('K', 1, 700): 4.6731107967079661091e-306,
    ('I', 2, 700): 1.5252262036997768772e+302,
    ('K', 2, 700): 4.6831281768188282127e-306,
}

DTN = {  # (direction, z): eigenvalue
    ('t', 1e-4): 0.71187300062944546424,
    ('n', 1e-4): 1.2788543757279569592,
    ('t', 0.01): 1.4876399801287105998,
    ('n', 0.01): 2.406928062268474031,
    ('t', 0.3): 5.7231062200498703359,
    ('n', 0.3): 6.7194158181333311289,
    ('t', 1): 14.14740466443366799,
    ('n', 1): 13.733190240637916774,
    ('t', 4): 51.055581964913767986,
    ('n', 4): 42.236753085147871363,
    ('t', 10): 126.05712517043189799,
    ('n', 10): 98.868984612498059063,
    ('t', 40): 502.76704326823412527,
    ('n', 40): 381.6760998095173341,
}

SINGLE_FORWARD = {  # (eps, k): (tangential 2x2, normal 3x3)
    (0.05, 1): (
        [[complex(0.046490121419728734082, 0.0), complex(0.0, 0.0070861530196716135196)], [complex(0.0, -0.0070861530196716135196), complex(0.0013782701962768165028, 0.0)]],
        [[complex(0.024894381523346582791, 0.0), complex(-0.01933846468799131617, 0.0), complex(0.0, 0.0026989827265977706157)], [complex(-0.01933846468799131617, 0.0), complex(0.026272651719623399293, 0.0), complex(0.0, -0.0043871702930738429039)], [complex(0.0, -0.0026989827265977706157), complex(0.0, 0.0043871702930738429039), complex(0.02167692059961194017, 0.0)]]),
    (0.05, 3): (
        [[complex(0.014566448639126602602, 0.0), complex(0.0, 0.0050769568677151683975)], [complex(0.0, -0.0050769568677151683975), complex(0.0037928115543104049678, 0.0)]],
        [[complex(0.011635941322060021336, 0.0), complex(-0.0074229199914274045778, 0.0), complex(0.0, 0.0010526588204847977425)], [complex(-0.0074229199914274045778, 0.0), complex(0.015428752876370426304, 0.0), complex(0.0, -0.004024298047230370655)], [complex(0.0, -0.0010526588204847977425), complex(0.0, 0.004024298047230370655), complex(0.013672042771079327096, 0.0)]]),
    (0.01, 2): (
        [[complex(0.017288162636090189161, 0.0), complex(0.0, 0.0010813804556245121125)], [complex(0.0, -0.0010813804556245121125), complex(0.000077458148529481688695, 0.0)]],
        [[complex(0.0073211601943801043327, 0.0), complex(-0.0061099314282529392301, 0.0), complex(0.0, 0.0004649880945638503849)], [complex(-0.0061099314282529392301, 0.0), complex(0.0073986183429095860214, 0.0), complex(0.0, -0.00061639236106066172755)], [complex(0.0, -0.0004649880945638503849), complex(0.0, 0.00061639236106066172755), complex(0.0048257393788526898267, 0.0)]]),
    (0.2, 1): (
        [[complex(0.041074785130292329318, 0.0), complex(0.0, 0.015152290008901907316)], [complex(0.0, -0.015152290008901907316), complex(0.016959166589505556023, 0.0)]],
        [[complex(0.035501767459309591008, 0.0), complex(-0.020160743837787080739, 0.0), complex(0.0, 0.0016566140417082599405)], [complex(-0.020160743837787080739, 0.0), complex(0.05246093404881514703, 0.0), complex(0.0, -0.013495675967193647375)], [complex(0.0, -0.0016566140417082599405), complex(0.0, 0.013495675967193647375), complex(0.043604702026703285099, 0.0)]]),
}

DOUBLE_RESPONSE = {  # (eps, k): (e_z data in (e_z, e_r), e_x data in normal basis)
    (0.05, 1): ([complex(-0.34449118691698492083, 0.0), complex(0.0, 0.12754018196981023594)],
        [complex(-0.46745482921642002587, 0.0), complex(0.48866921984331146352, 0.0), complex(0.0, 0.12754018196981023594)]),
    (0.05, 3): ([complex(-0.082044090643111892729, 0.0), complex(0.0, 0.18621912128229719959)],
        [complex(-0.31312515802764499242, 0.0), complex(0.42515331759400274064, 0.0), complex(0.0, 0.18621912128229719959)]),
    (0.01, 2): ([complex(-0.45539588272426457739, 0.0), complex(0.0, 0.059668661721446782662)],
        [complex(-0.49426036334037705021, 0.0), complex(0.49806556759116532041, 0.0), complex(0.0, 0.059668661721446782662)]),
    (0.2, 1): ([complex(-0.027614218225403406234, 0.0), complex(0.0, 0.16741883676093377042)],
        [complex(-0.23884113614657388453, 0.0), complex(0.38761517602857198572, 0.0), complex(0.0, 0.16741883676093377042)]),
}
